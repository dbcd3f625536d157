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

#include "fedagg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fedagg {
namespace {

void check_lengths(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth) {
  if (pred.size() != truth.size()) {
    throw std::invalid_argument("metrics: " + std::to_string(pred.size()) + " predictions vs " +
                                std::to_string(truth.size()) + " labels");
  }
  if (pred.empty()) throw std::invalid_argument("metrics: empty input");
}

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double class_precision(const ConfusionCounts& cm, std::size_t c) {
  return ratio_or_zero(static_cast<double>(cm.true_positives(c)), static_cast<double>(cm.predicted(c)));
}

double class_recall(const ConfusionCounts& cm, std::size_t c) {
  return ratio_or_zero(static_cast<double>(cm.true_positives(c)), static_cast<double>(cm.actual(c)));
}

}  // namespace

Averaging parse_averaging(std::string_view name) {
  if (name == "macro") return Averaging::Macro;
  if (name == "micro") return Averaging::Micro;
  throw std::invalid_argument("unknown averaging mode '" + std::string(name) + "' (expected macro or micro)");
}

std::string_view to_string(Averaging a) { return a == Averaging::Macro ? "macro" : "micro"; }

ConfusionCounts::ConfusionCounts(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                                 std::size_t num_classes)
    : classes_(num_classes), counts_(num_classes * num_classes, 0) {
  check_lengths(pred, truth);
  if (num_classes < 2) throw std::invalid_argument("metrics: need at least 2 classes");
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] >= num_classes || truth[i] >= num_classes) {
      throw std::invalid_argument("metrics: label out of range at index " + std::to_string(i));
    }
    ++counts_[truth[i] * classes_ + pred[i]];
  }
  total_ = pred.size();
}

std::size_t ConfusionCounts::predicted(std::size_t c) const {
  std::size_t s = 0;
  for (std::size_t t = 0; t < classes_; ++t) s += at(t, c);
  return s;
}

std::size_t ConfusionCounts::actual(std::size_t c) const {
  std::size_t s = 0;
  for (std::size_t p = 0; p < classes_; ++p) s += at(c, p);
  return s;
}

std::size_t ConfusionCounts::correct() const {
  std::size_t s = 0;
  for (std::size_t c = 0; c < classes_; ++c) s += at(c, c);
  return s;
}

double accuracy(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth) {
  check_lengths(pred, truth);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double precision(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                 std::size_t num_classes, Averaging avg) {
  const ConfusionCounts cm(pred, truth, num_classes);
  // Single-label micro precision pools TP and FP over classes: correct / total.
  if (avg == Averaging::Micro) return static_cast<double>(cm.correct()) / static_cast<double>(cm.total());
  double sum = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) sum += class_precision(cm, c);
  return sum / static_cast<double>(num_classes);
}

double f1(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
          std::size_t num_classes, Averaging avg) {
  const ConfusionCounts cm(pred, truth, num_classes);
  if (avg == Averaging::Micro) return static_cast<double>(cm.correct()) / static_cast<double>(cm.total());
  double sum = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double p = class_precision(cm, c);
    const double r = class_recall(cm, c);
    sum += ratio_or_zero(2.0 * p * r, p + r);
  }
  return sum / static_cast<double>(num_classes);
}

double mcc(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
           std::size_t num_classes) {
  const ConfusionCounts cm(pred, truth, num_classes);
  // Gorodkin's R_K: (c·s − Σ p_k t_k) / sqrt((s² − Σ p_k²)(s² − Σ t_k²)).
  const double s = static_cast<double>(cm.total());
  const double c = static_cast<double>(cm.correct());
  double pt = 0.0, pp = 0.0, tt = 0.0;
  for (std::size_t k = 0; k < num_classes; ++k) {
    const double p = static_cast<double>(cm.predicted(k));
    const double t = static_cast<double>(cm.actual(k));
    pt += p * t;
    pp += p * p;
    tt += t * t;
  }
  const double den = (s * s - pp) * (s * s - tt);
  if (!(den > 0.0)) return 0.0;
  const double r = (c * s - pt) / std::sqrt(den);
  return std::clamp(r, -1.0, 1.0);
}

Scores score_all(std::span<const std::uint32_t> pred, std::span<const std::uint32_t> truth,
                 std::size_t num_classes, Averaging avg) {
  return Scores{accuracy(pred, truth), precision(pred, truth, num_classes, avg),
                f1(pred, truth, num_classes, avg), mcc(pred, truth, num_classes)};
}

}  // namespace fedagg
