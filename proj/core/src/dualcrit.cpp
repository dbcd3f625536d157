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

#include "fedagg/dualcrit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fedagg/error.hpp"

namespace fedagg {
namespace {

bool all_bit_equal(std::span<const double> xs) {
  const auto first = std::bit_cast<std::uint64_t>(xs.front());
  return std::all_of(xs.begin(), xs.end(),
                     [&](double x) { return std::bit_cast<std::uint64_t>(x) == first; });
}

}  // namespace

LambdaGrid::LambdaGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("lambda grid must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double x = values_[i];
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("lambda grid value " + std::to_string(x) + " outside [0, 1]");
    }
    if (i > 0 && !(x > values_[i - 1])) {
      throw std::invalid_argument("lambda grid must be strictly ascending");
    }
  }
}

LambdaGrid LambdaGrid::standard() {
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(static_cast<double>(i) / 10.0);
  return LambdaGrid(std::move(v));
}

std::vector<double> normalize_weights(std::span<const double> f) {
  if (f.empty()) throw std::invalid_argument("normalize_weights: empty input");
  double total = 0.0;
  for (double x : f) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument("normalize_weights: weights must be finite and non-negative");
    }
    total += x;
  }
  if (!(total > 0.0)) throw std::invalid_argument("normalize_weights: weights sum to zero");

  const double n = static_cast<double>(f.size());
  if (all_bit_equal(f)) return std::vector<double>(f.size(), 1.0 / n);
  if (std::abs(total - 1.0) <= 4.0 * n * std::numeric_limits<double>::epsilon()) {
    return std::vector<double>(f.begin(), f.end());
  }
  std::vector<double> w(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) w[i] = f[i] / total;
  return w;
}

std::vector<double> quantity_factors(std::span<const std::size_t> sizes) {
  if (sizes.empty()) throw std::invalid_argument("quantity_factors: empty size list");
  std::vector<double> as_real;
  as_real.reserve(sizes.size());
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("quantity_factors: dataset sizes must be >= 1");
    as_real.push_back(static_cast<double>(s));
  }
  return normalize_weights(as_real);
}

std::optional<std::vector<double>> quality_factors(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("quality_factors: empty score list");
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0) {
      throw std::invalid_argument("quality_factors: scores must be finite and non-negative");
    }
  }
  if (std::all_of(scores.begin(), scores.end(), [](double s) { return s == 0.0; })) return std::nullopt;
  return normalize_weights(scores);
}

std::vector<double> blend(std::span<const double> q, std::span<const double> v, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("blend: lambda must be in [0, 1], got " + std::to_string(lambda));
  }
  if (q.size() != v.size()) {
    throw StructuralError("blend: " + std::to_string(q.size()) + " quality factors vs " +
                          std::to_string(v.size()) + " quantity factors");
  }
  std::vector<double> f(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) f[i] = lambda * q[i] + (1.0 - lambda) * v[i];
  return f;
}

DualWeights compute_dual_weights(std::span<const ClientReport> sorted_reports, double lambda) {
  std::vector<std::size_t> sizes;
  std::vector<double> scores;
  for (const auto& r : sorted_reports) {
    sizes.push_back(r.size);
    scores.push_back(r.score);
  }
  DualWeights dw;
  dw.lambda = lambda;
  dw.v = quantity_factors(sizes);
  if (auto q = quality_factors(scores)) {
    dw.q = std::move(*q);
  } else {
    std::clog << "[warn] dualcrit: every client reported a zero score; "
                 "falling back to quantity-only weights\n";
    dw.q = dw.v;
    dw.quality_fallback = true;
  }
  dw.f = blend(dw.q, dw.v, lambda);
  dw.w = normalize_weights(dw.f);
  return dw;
}

ParameterVector dualcrit_aggregate(std::span<const ClientReport> reports, double lambda) {
  const auto sorted = canonical_order(reports);
  const auto dw = compute_dual_weights(sorted, lambda);
  return weighted_sum(parameters_of(sorted), dw.w);
}

LambdaSelection select_lambda(std::span<const ClientReport> reports, const LambdaGrid& grid,
                              std::span<const Example> validation_set, const ModelSpec& spec) {
  if (validation_set.empty()) throw std::invalid_argument("select_lambda: empty validation set");
  const auto sorted = canonical_order(reports);
  const auto params = parameters_of(sorted);

  std::optional<LambdaSelection> best;
  for (double lambda : grid.values()) {
    auto dw = compute_dual_weights(sorted, lambda);
    auto model = weighted_sum(params, dw.w);
    const double acc = evaluate_score(model, validation_set, spec);
    // Grid is ascending, so strict improvement keeps the smallest λ on ties.
    if (!best || acc > best->validation_accuracy) {
      best = LambdaSelection{lambda, std::move(model), acc, std::move(dw)};
    }
  }
  return std::move(*best);
}

}  // namespace fedagg
