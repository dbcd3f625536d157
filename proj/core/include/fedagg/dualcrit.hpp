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
#include <optional>
#include <span>
#include <vector>

#include "fedagg/client_report.hpp"
#include "fedagg/data.hpp"
#include "fedagg/learner.hpp"
#include "fedagg/params.hpp"

namespace fedagg {

/// Dual-criterion aggregation weights.
///
/// Each client contributes a quantity factor v_i = |D_i| / Σ|D_j| and a
/// quality factor q_i = Score_i / Σ Score_j. The two are blended as
/// f_i = λ·q_i + (1 − λ)·v_i and normalized into w_i = f_i / Σ f_j, which
/// are the coefficients of the global parameter update θ = Σ w_i·θ_i.
///
/// Because Σq = Σv = 1, the final normalization is an identity up to
/// rounding; it is kept so that the weights always sum to one.
struct DualWeights {
  std::vector<double> v;
  std::vector<double> q;  // equals v when every score was zero (quantity fallback)
  double lambda = 0.0;
  std::vector<double> f;
  std::vector<double> w;
  bool quality_fallback = false;
};

/// Ascending λ candidates in [0, 1], evaluated against the validation set
/// every round.
class LambdaGrid {
 public:
  /// Throws std::invalid_argument unless values are non-empty, inside [0, 1]
  /// and strictly ascending.
  explicit LambdaGrid(std::vector<double> values);

  /// {0.0, 0.1, ..., 1.0}
  static LambdaGrid standard();

  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

std::vector<double> quantity_factors(std::span<const std::size_t> sizes);

/// Returns std::nullopt when every score is zero: the ratio is undefined
/// and the caller must fall back. Negative or non-finite scores throw.
std::optional<std::vector<double>> quality_factors(std::span<const double> scores);

std::vector<double> blend(std::span<const double> q, std::span<const double> v, double lambda);

/// w_i = f_i / Σ f_j. Two rounding conventions keep the reductions exact:
/// bitwise-equal inputs yield exactly 1/N each, and an input whose sum is
/// already 1 to within a few ulps is returned unchanged.
std::vector<double> normalize_weights(std::span<const double> f);

/// Full pipeline for reports already in canonical order. Falls back to
/// pure quantity weights (and logs a warning) when all scores are zero.
DualWeights compute_dual_weights(std::span<const ClientReport> sorted_reports, double lambda);

ParameterVector dualcrit_aggregate(std::span<const ClientReport> reports, double lambda);

struct LambdaSelection {
  double lambda = 0.0;
  ParameterVector parameters;
  double validation_accuracy = 0.0;
  DualWeights weights;
};

/// Aggregates once per grid value and keeps the model with the highest
/// validation accuracy; ties go to the smallest λ.
LambdaSelection select_lambda(std::span<const ClientReport> reports, const LambdaGrid& grid,
                              std::span<const Example> validation_set, const ModelSpec& spec);

}  // namespace fedagg
