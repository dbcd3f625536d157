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
#include <span>
#include <string_view>
#include <vector>

namespace fedagg {

enum class Averaging { Macro, Micro };

Averaging parse_averaging(std::string_view name);
std::string_view to_string(Averaging a);

/// C×C count matrix, rows = true class, columns = predicted class.
class ConfusionCounts {
 public:
  ConfusionCounts(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                  std::size_t num_classes);

  std::size_t num_classes() const noexcept { return classes_; }
  std::size_t total() const noexcept { return total_; }
  std::size_t at(std::size_t truth, std::size_t pred) const { return counts_[truth * classes_ + pred]; }

  std::size_t true_positives(std::size_t c) const { return at(c, c); }
  std::size_t predicted(std::size_t c) const;  // column sum
  std::size_t actual(std::size_t c) const;     // row sum
  std::size_t correct() const;

 private:
  std::size_t classes_;
  std::size_t total_ = 0;
  std::vector<std::size_t> counts_;
};

// All functions throw std::invalid_argument on length mismatch, empty input
// or a label >= num_classes. Per-class terms with a zero denominator count
// as 0 rather than being skipped.

double accuracy(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth);
double precision(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                 std::size_t num_classes, Averaging avg = Averaging::Macro);
double f1(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
          std::size_t num_classes, Averaging avg = Averaging::Macro);
/// Matthews correlation, generalized to C classes; 0 when the denominator vanishes.
double mcc(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
           std::size_t num_classes);

inline double precision_macro(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                              std::size_t num_classes) {
  return precision(pred, truth, num_classes, Averaging::Macro);
}
inline double f1_macro(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                       std::size_t num_classes) {
  return f1(pred, truth, num_classes, Averaging::Macro);
}

struct Scores {
  double accuracy = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double mcc = 0.0;
};

Scores score_all(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                 std::size_t num_classes, Averaging avg = Averaging::Macro);

}  // namespace fedagg
