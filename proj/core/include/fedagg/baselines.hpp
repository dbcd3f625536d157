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

#include <cstdint>
#include <span>
#include <utility>

#include "fedagg/client_report.hpp"
#include "fedagg/params.hpp"

namespace fedagg {

/// Server-side momentum buffer; starts at zero for every experiment cell.
struct MomentumState {
  ParameterVector velocity;
  double beta = 0.9;
  double eta = 1.0;

  static MomentumState zeros(std::size_t length, double beta, double eta);
};

struct BaselineConfig {
  double alpha = 0.5;    // personalized: weight kept on the previous global model
  double epsilon = 1.0;  // dp: Laplace scale is 1/epsilon
  unsigned q_level = 8;  // quantized: 2^q_level - 1 uniform steps
  double beta = 0.9;
  double eta = 1.0;
  std::uint64_t noise_seed = 0;
};

// Every function below sorts reports by client id before summing, so the
// result does not depend on arrival order.

ParameterVector simple_average(std::span<const ClientReport> reports);

/// Weights |D_i| / Σ|D_j|, normalized through the same path the
/// dual-criterion aggregator uses.
ParameterVector weighted_mean(std::span<const ClientReport> reports);

/// Coordinate-wise median; mean of the two middle values for even N.
ParameterVector median_aggregate(std::span<const ClientReport> reports);

/// M_new = β·M + (weighted_mean − prev);  θ = prev + η·M_new.
std::pair<ParameterVector, MomentumState> momentum_aggregate(std::span<const ClientReport> reports,
                                                             const ParameterVector& prev_global,
                                                             const MomentumState& state);

/// α·prev + (1 − α)·simple_average.
ParameterVector personalized_aggregate(std::span<const ClientReport> reports,
                                       const ParameterVector& prev_global, double alpha);

/// simple_average plus i.i.d. Laplace(0, 1/ε) noise per coordinate.
/// No clipping or sensitivity scaling is applied.
ParameterVector dp_average(std::span<const ClientReport> reports, double epsilon, std::uint64_t noise_seed);

/// Per-client min/max affine map onto [0, 1], rounding to 2^q_level − 1
/// steps (half away from zero), inverse map, then simple average. A client
/// whose values are all equal passes through unquantized. The range
/// endpoints map back exactly.
ParameterVector quantize_vector(const ParameterVector& p, unsigned q_level);
ParameterVector quantize_aggregate(std::span<const ClientReport> reports, unsigned q_level);

}  // namespace fedagg
