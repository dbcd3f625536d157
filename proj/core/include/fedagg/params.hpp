// Copyright 2026 The fedagg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <vector>

namespace fedagg {

/// Flat, immutable model parameter vector; the unit every aggregator
/// consumes and produces.
///
/// Layout of a layered model: layer-major, each weight matrix row-major
/// (output rows, input columns), followed by that layer's bias vector.
/// All values are finite and the vector is never empty.
class ParameterVector {
 public:
  /// Throws std::invalid_argument if `values` is empty or holds a NaN/Inf.
  explicit ParameterVector(std::vector<double> values);
  ParameterVector(std::initializer_list<double> values);

  static ParameterVector zeros(std::size_t length);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  // Bitwise equality, so +0.0 and -0.0 differ.
  bool bit_equal(const ParameterVector& other) const noexcept;

  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;

 private:
  std::vector<double> values_;
};

ParameterVector scale(const ParameterVector& p, double c);
ParameterVector add(const ParameterVector& a, const ParameterVector& b);

/// Σ ws[i]·ps[i], accumulated in double precision in the order given.
///
/// Callers that need arrival-order independence sort their inputs by client
/// id first (see canonical_order in client_report.hpp). When every weight is
/// bitwise equal to 1/N the result is computed as an exact-sum mean, so
/// uniform weighting reproduces the plain average bit for bit.
ParameterVector weighted_sum(std::span<const ParameterVector> ps, std::span<const double> ws);

/// Plain mean of the inputs (exact-sum route used by weighted_sum for 1/N).
ParameterVector mean(std::span<const ParameterVector> ps);

/// Checkpoint encoding: "FAGG", one version byte, u64 LE length, then
/// `length` little-endian IEEE-754 doubles.
inline constexpr std::uint8_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const ParameterVector& p);
ParameterVector decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::filesystem::path& path, const ParameterVector& p);
ParameterVector load_checkpoint(const std::filesystem::path& path);

}  // namespace fedagg
