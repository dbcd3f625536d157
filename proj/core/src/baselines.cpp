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

#include "fedagg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedagg/dualcrit.hpp"
#include "fedagg/error.hpp"
#include "fedagg/random.hpp"

namespace fedagg {
namespace {

constexpr unsigned kMaxQuantizationBits = 52;

void require_length(const ParameterVector& p, std::size_t length, const char* what) {
  if (p.size() != length) {
    throw StructuralError(std::string(what) + " has length " + std::to_string(p.size()) +
                          ", client parameters have length " + std::to_string(length));
  }
}

}  // namespace

MomentumState MomentumState::zeros(std::size_t length, double beta, double eta) {
  return MomentumState{ParameterVector::zeros(length), beta, eta};
}

ParameterVector simple_average(std::span<const ClientReport> reports) {
  const auto sorted = canonical_order(reports);
  return mean(parameters_of(sorted));
}

ParameterVector weighted_mean(std::span<const ClientReport> reports) {
  const auto sorted = canonical_order(reports);
  std::vector<std::size_t> sizes;
  for (const auto& r : sorted) sizes.push_back(r.size);
  const auto w = normalize_weights(quantity_factors(sizes));
  return weighted_sum(parameters_of(sorted), w);
}

ParameterVector median_aggregate(std::span<const ClientReport> reports) {
  const auto sorted = canonical_order(reports);
  const std::size_t n = sorted.size();
  const std::size_t length = sorted.front().parameters.size();
  std::vector<double> column(n);
  std::vector<double> out(length);
  for (std::size_t j = 0; j < length; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = sorted[i].parameters[j];
    std::sort(column.begin(), column.end());
    out[j] = n % 2 == 1 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
  }
  return ParameterVector(std::move(out));
}

std::pair<ParameterVector, MomentumState> momentum_aggregate(std::span<const ClientReport> reports,
                                                             const ParameterVector& prev_global,
                                                             const MomentumState& state) {
  if (!(state.beta >= 0.0 && state.beta < 1.0)) throw std::invalid_argument("momentum: beta must be in [0, 1)");
  if (!(state.eta >= 0.0) || !std::isfinite(state.eta)) throw std::invalid_argument("momentum: eta must be >= 0");
  const ParameterVector target = weighted_mean(reports);
  require_length(prev_global, target.size(), "previous global model");
  require_length(state.velocity, target.size(), "momentum buffer");

  const double beta = state.beta;
  const double eta = state.eta;
  std::vector<double> velocity(target.size());
  std::vector<double> global(target.size());
  for (std::size_t j = 0; j < target.size(); ++j) {
    velocity[j] = beta * state.velocity[j] + (target[j] - prev_global[j]);
    // prev + η(βM + target − prev), evaluated in blended form so η = 1, β = 0
    // returns target exactly and η = 0 returns prev exactly.
    global[j] = eta * target[j] + ((1.0 - eta) * prev_global[j] + eta * beta * state.velocity[j]);
  }
  return {ParameterVector(std::move(global)),
          MomentumState{ParameterVector(std::move(velocity)), beta, eta}};
}

ParameterVector personalized_aggregate(std::span<const ClientReport> reports,
                                       const ParameterVector& prev_global, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("personalized: alpha must be in [0, 1], got " + std::to_string(alpha));
  }
  const ParameterVector avg = simple_average(reports);
  require_length(prev_global, avg.size(), "previous global model");
  std::vector<double> out(avg.size());
  for (std::size_t j = 0; j < avg.size(); ++j) out[j] = alpha * prev_global[j] + (1.0 - alpha) * avg[j];
  return ParameterVector(std::move(out));
}

ParameterVector dp_average(std::span<const ClientReport> reports, double epsilon, std::uint64_t noise_seed) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("dp: epsilon must be positive and finite");
  }
  const ParameterVector avg = simple_average(reports);
  const double b = 1.0 / epsilon;
  Rng rng(noise_seed);
  std::vector<double> out(avg.size());
  for (std::size_t j = 0; j < avg.size(); ++j) out[j] = avg[j] + rng.laplace(b);
  return ParameterVector(std::move(out));
}

ParameterVector quantize_vector(const ParameterVector& p, unsigned q_level) {
  if (q_level < 1 || q_level > kMaxQuantizationBits) {
    throw std::invalid_argument("quantized: q_level must be in [1, 52], got " + std::to_string(q_level));
  }
  const auto [lo_it, hi_it] = std::minmax_element(p.values().begin(), p.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) return p;

  const double steps = std::ldexp(1.0, static_cast<int>(q_level)) - 1.0;
  const double range = hi - lo;
  std::vector<double> out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double level = std::round((p[j] - lo) / range * steps);  // std::round: half away from zero
    if (level <= 0.0) {
      out[j] = lo;
    } else if (level >= steps) {
      out[j] = hi;
    } else {
      out[j] = lo + (level / steps) * range;
    }
  }
  return ParameterVector(std::move(out));
}

ParameterVector quantize_aggregate(std::span<const ClientReport> reports, unsigned q_level) {
  auto sorted = canonical_order(reports);
  std::vector<ParameterVector> quantized;
  quantized.reserve(sorted.size());
  for (const auto& r : sorted) quantized.push_back(quantize_vector(r.parameters, q_level));
  return mean(quantized);
}

}  // namespace fedagg
