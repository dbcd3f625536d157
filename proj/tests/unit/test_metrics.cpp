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

#include <algorithm>
#include <numeric>
#include <random>

#include "fedagg/metrics.hpp"
#include "oracles.hpp"

using namespace fedagg;
using Labels = std::vector<std::uint32_t>;

TEST_CASE("accuracy") {
  const Labels t{0, 1, 1, 0};
  CHECK(accuracy(t, t) == 1.0);
  CHECK(accuracy(Labels{1, 0, 0, 1}, t) == 0.0);
  Labels pred(100, 0), truth(100, 0);
  for (std::size_t i = 83; i < 100; ++i) pred[i] = 1;
  CHECK(accuracy(pred, truth) == doctest::Approx(0.83).epsilon(1e-15));
  CHECK_THROWS_AS(accuracy(Labels{0}, Labels{0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(accuracy(Labels{}, Labels{}), std::invalid_argument);
}

TEST_CASE("precision") {
  const Labels t{0, 1, 2, 1};
  CHECK(precision_macro(t, t, 3) == 1.0);
  // TP = 1, FP = 1 for class 0; class 1 never predicted.
  CHECK(precision_macro(Labels{0, 0}, Labels{0, 1}, 2) == 0.25);
  CHECK(precision_macro(Labels(10, 1), Labels{0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, 2) == 0.25);
  CHECK_THROWS_AS(precision_macro(Labels{0, 3}, Labels{0, 1}, 3), std::invalid_argument);
}

TEST_CASE("f1") {
  const Labels t{0, 1, 2, 1};
  CHECK(f1_macro(t, t, 3) == 1.0);
  // Class 2 is never predicted and never true; its F1 counts as 0.
  CHECK(f1_macro(Labels{0, 1}, Labels{0, 1}, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("mcc") {
  const Labels t{0, 1, 1, 0, 2};
  CHECK(mcc(t, t, 3) == doctest::Approx(1.0).epsilon(1e-15));
  // TP = TN = FP = FN = 1
  CHECK(mcc(Labels{1, 0, 1, 0}, Labels{1, 0, 0, 1}, 2) == 0.0);
  CHECK(mcc(Labels{1, 0, 1, 0}, Labels{0, 1, 0, 1}, 2) == doctest::Approx(-1.0).epsilon(1e-15));
  // Constant predictor: denominator vanishes.
  CHECK(mcc(Labels{1, 1, 1}, Labels{0, 1, 0}, 2) == 0.0);
}

TEST_CASE("micro averaging") {
  const Labels pred{0, 1, 1, 2, 0};
  const Labels truth{0, 1, 2, 2, 1};
  CHECK(precision(pred, truth, 3, Averaging::Micro) == accuracy(pred, truth));
  CHECK(f1(pred, truth, 3, Averaging::Micro) == accuracy(pred, truth));
  CHECK(parse_averaging("micro") == Averaging::Micro);
  CHECK(to_string(Averaging::Macro) == "macro");
  CHECK_THROWS(parse_averaging("weighted"));
}

TEST_CASE("property: brute-force oracle agreement and invariants") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t classes = 2 + rng() % 3;
    const std::size_t n = 1 + rng() % 50;
    Labels pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = static_cast<std::uint32_t>(rng() % classes);
      truth[i] = static_cast<std::uint32_t>(rng() % classes);
    }
    const auto got = score_all(pred, truth, classes);
    const auto want = oracle::brute_force_metrics(pred, truth, classes);
    CHECK(std::abs(got.accuracy - want.accuracy) <= 1e-12);
    CHECK(std::abs(got.precision - want.precision) <= 1e-12);
    CHECK(std::abs(got.f1 - want.f1) <= 1e-12);
    CHECK(std::abs(got.mcc - want.mcc) <= 1e-12);

    CHECK(got.mcc >= -1.0);
    CHECK(got.mcc <= 1.0);
    for (double m : {got.accuracy, got.precision, got.f1}) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0);
    }

    // Accuracy is micro-averaged recall.
    const ConfusionCounts cm(pred, truth, classes);
    std::size_t tp = 0, actual = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      tp += cm.true_positives(c);
      actual += cm.actual(c);
    }
    CHECK(got.accuracy == static_cast<double>(tp) / static_cast<double>(actual));
    CHECK(cm.total() == n);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Labels p2(n), t2(n);
    for (std::size_t i = 0; i < n; ++i) {
      p2[i] = pred[perm[i]];
      t2[i] = truth[perm[i]];
    }
    const auto permuted = score_all(p2, t2, classes);
    CHECK(permuted.accuracy == got.accuracy);
    CHECK(permuted.precision == got.precision);
    CHECK(permuted.f1 == got.f1);
    CHECK(permuted.mcc == got.mcc);
  }
}
