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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fedagg/data.hpp"
#include "fedagg/error.hpp"
#include "fedagg/learner.hpp"
#include "fedagg/random.hpp"
#include "oracles.hpp"

using namespace fedagg;

namespace {

std::vector<oracle::Point> as_points(std::span<const Example> xs) {
  std::vector<oracle::Point> out;
  for (const auto& e : xs) out.push_back({e.features, e.label});
  return out;
}

DatasetShard shard_of(std::vector<Example> xs, ClientId id = 1) {
  DatasetShard s;
  s.client_id = id;
  s.examples = std::move(xs);
  return s;
}

std::vector<double> random_params(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> p(n);
  for (double& x : p) x = u(rng);
  return p;
}

}  // namespace

TEST_CASE("parameter_count and layout") {
  CHECK(ModelSpec{2, {}, 3}.parameter_count() == 2 * 3 + 3);
  CHECK(ModelSpec{4, {16}, 3}.parameter_count() == 4 * 16 + 16 + 16 * 3 + 3);
  CHECK(ModelSpec{2, {5, 7}, 2}.parameter_count() == 2 * 5 + 5 + 5 * 7 + 7 + 7 * 2 + 2);
  CHECK_THROWS_AS(ModelSpec({2, {0}, 3}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec({0, {}, 3}).validate(), std::invalid_argument);

  const ModelSpec spec{3, {4}, 2};
  const auto p = init_parameters(spec, 9);
  CHECK(p.size() == spec.parameter_count());
  for (double x : p.values()) {
    CHECK(x >= -0.1);
    CHECK(x <= 0.1);
  }
  CHECK(init_parameters(spec, 9).bit_equal(p));
}

TEST_CASE("logistic loss matches the hand-written oracle") {
  const ModelSpec spec{3, {}, 4};
  const auto data = generate_synthetic(60, 3, 4, 2);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_params(rng, spec.parameter_count(), 1.0);
    const double expected = oracle::logistic_loss(p, as_points(data), 3, 4);
    CHECK(mean_cross_entropy(p, data, spec) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(loss_and_gradient(p, data, spec).loss == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("logistic regression gradient matches central differences") {
  const ModelSpec spec{2, {}, 3};
  const auto data = generate_synthetic(40, 2, 3, 5);
  const auto points = as_points(data);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_params(rng, spec.parameter_count(), 1.0);
    const auto analytic = loss_and_gradient(p, data, spec).gradient;
    const auto numeric = oracle::finite_difference(
        p, [&](const std::vector<double>& q) { return oracle::logistic_loss(q, points, 2, 3); });
    CHECK(oracle::relative_error(analytic, numeric) < 1e-4);
  }
}

std::vector<std::size_t> widths_of(const ModelSpec& spec) {
  std::vector<std::size_t> w{spec.input_dim};
  w.insert(w.end(), spec.hidden_dims.begin(), spec.hidden_dims.end());
  w.push_back(spec.num_classes);
  return w;
}

TEST_CASE("MLP loss matches the layer-by-layer oracle") {
  const ModelSpec spec{3, {5, 4}, 2};
  const auto data = generate_synthetic(30, 3, 2, 6);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_params(rng, spec.parameter_count(), 0.5);
    CHECK(mean_cross_entropy(p, data, spec) ==
          doctest::Approx(oracle::mlp_loss(p, as_points(data), widths_of(spec))).epsilon(1e-12));
  }
}

TEST_CASE("MLP gradient matches central differences in every layer") {
  for (const ModelSpec& spec : {ModelSpec{2, {8}, 3}, ModelSpec{3, {5, 4}, 2}}) {
    const auto data = generate_synthetic(30, spec.input_dim, spec.num_classes, 6);
    const auto points = as_points(data);
    const auto widths = widths_of(spec);
    std::mt19937_64 rng(3);
    int checked = 0;
    while (checked < 10) {
      const auto p = random_params(rng, spec.parameter_count(), 0.5);
      // Central differences say nothing at a ReLU kink; draw again.
      if (!oracle::stencil_is_smooth(p, points, widths)) continue;
      ++checked;
      const auto analytic = loss_and_gradient(p, data, spec).gradient;
      const auto numeric = oracle::finite_difference(
          p, [&](const std::vector<double>& q) { return oracle::mlp_loss(q, points, widths); });
      CHECK(oracle::relative_error(analytic, numeric) < 1e-4);
    }
  }
}

TEST_CASE("train_local") {
  const ModelSpec spec{2, {}, 2};
  const auto shard = shard_of(generate_synthetic(200, 2, 2, 8));
  const auto init = init_parameters(spec, 1);

  SUBCASE("zero learning rate is the identity") {
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    cfg.local_epochs = 3;
    CHECK(train_local(init, shard, spec, cfg).bit_equal(init));
  }

  SUBCASE("one epoch on separable blobs lowers the loss") {
    // Two tight, far-apart clusters: linearly separable.
    std::vector<Example> xs;
    Rng rng(4);
    for (std::uint64_t i = 0; i < 100; ++i) {
      const std::uint32_t label = i % 2;
      const double cx = label ? 4.0 : -4.0;
      xs.push_back({i, {cx + 0.3 * rng.normal(), 0.3 * rng.normal()}, label});
    }
    const auto blobs = shard_of(xs);
    const auto points = as_points(blobs.examples);
    TrainConfig cfg;
    const auto before = oracle::logistic_loss({init.values().begin(), init.values().end()}, points, 2, 2);
    const auto trained = train_local(init, blobs, spec, cfg);
    const auto after = oracle::logistic_loss({trained.values().begin(), trained.values().end()}, points, 2, 2);
    CHECK(after < before);
  }

  SUBCASE("deterministic in seed") {
    TrainConfig cfg;
    cfg.seed = 77;
    cfg.local_epochs = 2;
    const auto a = train_local(init, shard, spec, cfg);
    CHECK(train_local(init, shard, spec, cfg).bit_equal(a));
    cfg.seed = 78;
    CHECK_FALSE(train_local(init, shard, spec, cfg).bit_equal(a));
  }

  SUBCASE("divergence names the client and round") {
    TrainConfig cfg;
    cfg.learning_rate = 1e308;
    cfg.local_epochs = 4;
    const auto noisy = shard_of(generate_synthetic(64, 2, 2, 1), 7);
    try {
      train_local(init, noisy, spec, cfg, 12);
      FAIL("expected TrainingError");
    } catch (const TrainingError& e) {
      CHECK(e.client_id() == 7);
      CHECK(e.round() == 12);
      const std::string msg = e.what();
      CHECK(msg.find('7') != std::string::npos);
      CHECK(msg.find("12") != std::string::npos);
    }
  }

  SUBCASE("length mismatch") {
    TrainConfig cfg;
    CHECK_THROWS_AS(train_local(ParameterVector::zeros(3), shard, spec, cfg), StructuralError);
  }
}

TEST_CASE("evaluate_score") {
  const ModelSpec spec{2, {}, 2};

  SUBCASE("perfect model") {
    // Class 1 iff x0 > 0.
    const ParameterVector p{-1.0, 0.0, 1.0, 0.0, 0.0, 0.0};
    std::vector<Example> xs;
    for (std::uint64_t i = 0; i < 20; ++i) {
      const double x = (i % 2 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i));
      xs.push_back({i, {x, 0.3}, static_cast<std::uint32_t>(i % 2)});
    }
    CHECK(evaluate_score(p, xs, spec) == 1.0);
  }

  SUBCASE("constant predictor on a 53/47 split") {
    // All-zero parameters tie every logit, so class 0 is always predicted.
    std::vector<Example> xs;
    for (std::uint64_t i = 0; i < 100; ++i) xs.push_back({i, {0.1 * i, -0.2}, i < 53 ? 0u : 1u});
    CHECK(evaluate_score(ParameterVector::zeros(6), xs, spec) == doctest::Approx(0.53).epsilon(1e-15));
  }

  SUBCASE("random initializations are near chance on balanced data") {
    const auto xs = generate_synthetic(400, 2, 2, 10);
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const double s = evaluate_score(init_parameters(spec, seed), xs, spec);
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
      total += s;
    }
    const double mean = total / 20.0;
    CHECK(mean >= 0.3);
    CHECK(mean <= 0.7);
  }

  CHECK_THROWS_AS(evaluate_score(ParameterVector::zeros(6), std::vector<Example>{}, spec), std::invalid_argument);
}

TEST_CASE("predict breaks ties toward the lowest class") {
  const ModelSpec spec{2, {}, 3};
  const std::vector<double> zeros(spec.parameter_count(), 0.0);
  const std::vector<double> x{1.0, 2.0};
  CHECK(predict(zeros, x, spec) == 0);
}
