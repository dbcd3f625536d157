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

#include "fedagg/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fedagg/error.hpp"
#include "fedagg/random.hpp"

namespace fedagg {
namespace {

std::size_t round_half_away(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

}  // namespace

std::vector<Example> generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.num_classes < 2) throw std::invalid_argument("generate_synthetic: need at least 2 classes");
  if (spec.dims < 2) throw std::invalid_argument("generate_synthetic: need at least 2 dimensions");
  if (spec.num_examples < spec.num_classes) {
    throw std::invalid_argument("generate_synthetic: n (" + std::to_string(spec.num_examples) +
                                ") must be at least the class count (" +
                                std::to_string(spec.num_classes) + ")");
  }
  if (!(spec.cluster_radius > 0.0) || !std::isfinite(spec.cluster_radius)) {
    throw std::invalid_argument("generate_synthetic: cluster_radius must be positive");
  }

  std::vector<std::vector<double>> means(spec.num_classes, std::vector<double>(spec.dims, 0.0));
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(c) /
                         static_cast<double>(spec.num_classes);
    means[c][0] = spec.cluster_radius * std::cos(angle);
    means[c][1] = spec.cluster_radius * std::sin(angle);
  }

  Rng rng(seed);
  std::vector<std::uint32_t> labels(spec.num_examples);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = static_cast<std::uint32_t>(i % spec.num_classes);
  }
  rng.shuffle(std::span(labels));

  std::vector<Example> out(spec.num_examples);
  for (std::size_t i = 0; i < out.size(); ++i) {
    Example& ex = out[i];
    ex.id = i;
    ex.label = labels[i];
    ex.features.resize(spec.dims);
    for (std::size_t k = 0; k < spec.dims; ++k) ex.features[k] = means[ex.label][k] + rng.normal();
  }
  return out;
}

std::vector<Example> generate_synthetic(std::size_t n, std::size_t dims, std::size_t classes,
                                        std::uint64_t seed) {
  return generate_synthetic(SyntheticSpec{n, dims, classes}, seed);
}

std::vector<DatasetShard> partition(std::span<const Example> data, std::span<const std::size_t> sizes,
                                    std::uint64_t seed) {
  const std::size_t requested = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (requested > data.size()) {
    throw std::invalid_argument("partition: requested " + std::to_string(requested) +
                                " examples but only " + std::to_string(data.size()) + " available");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span(order));

  std::vector<DatasetShard> shards(sizes.size());
  std::size_t cursor = 0;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    shards[s].client_id = static_cast<ClientId>(s + 1);
    shards[s].examples.reserve(sizes[s]);
    for (std::size_t k = 0; k < sizes[s]; ++k) shards[s].examples.push_back(data[order[cursor++]]);
  }
  return shards;
}

DatasetShard corrupt_labels(const DatasetShard& shard, double fraction, std::size_t num_classes,
                            std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("corrupt_labels: fraction must be in [0, 1]");
  }
  if (num_classes < 2) throw std::invalid_argument("corrupt_labels: need at least 2 classes");

  DatasetShard out = shard;
  out.noise_fraction = fraction;
  const std::size_t count = round_half_away(fraction * static_cast<double>(shard.size()));
  if (count == 0) return out;

  std::vector<std::size_t> order(shard.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span(order));
  for (std::size_t k = 0; k < count; ++k) {
    auto& label = out.examples[order[k]].label;
    // Draw from the C − 1 other classes by skipping over the current one.
    auto draw = static_cast<std::uint32_t>(rng.below(num_classes - 1));
    if (draw >= label) ++draw;
    label = draw;
  }
  return out;
}

DataLayout make_layout(std::span<const Example> pool, const LayoutSpec& spec, std::size_t num_classes,
                       std::uint64_t seed) {
  if (spec.client_sizes.empty()) throw std::invalid_argument("make_layout: no clients");
  for (std::size_t s : spec.client_sizes) {
    if (s == 0) throw std::invalid_argument("make_layout: client shard sizes must be >= 1");
  }
  if (spec.evaluation_size == 0 || spec.validation_size == 0) {
    throw std::invalid_argument("make_layout: evaluation and validation sets must be non-empty");
  }
  if (!spec.noise_fractions.empty() && spec.noise_fractions.size() != spec.client_sizes.size()) {
    throw StructuralError("make_layout: " + std::to_string(spec.noise_fractions.size()) +
                          " noise fractions for " + std::to_string(spec.client_sizes.size()) +
                          " clients");
  }

  std::vector<std::size_t> sizes = spec.client_sizes;
  sizes.push_back(spec.evaluation_size);
  sizes.push_back(spec.validation_size);
  auto parts = partition(pool, sizes, derive_seed({seed, 0x5041525449ULL}));

  DataLayout layout;
  layout.validation_set = std::move(parts.back().examples);
  parts.pop_back();
  layout.evaluation_set = std::move(parts.back().examples);
  parts.pop_back();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const double fraction = spec.noise_fractions.empty() ? 0.0 : spec.noise_fractions[i];
    layout.shards.push_back(
        corrupt_labels(parts[i], fraction, num_classes, derive_seed({seed, 0x4E4F495345ULL, parts[i].client_id})));
  }
  return layout;
}

std::vector<Example> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": missing header row");
  const std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 2) throw IoError(path.string() + ": need at least one feature and a label column");

  std::vector<Example> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != columns) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(columns) + " columns, got " + std::to_string(cells.size()));
    }
    Example ex;
    ex.id = out.size();
    try {
      for (std::size_t k = 0; k + 1 < columns; ++k) {
        std::size_t used = 0;
        ex.features.push_back(std::stod(cells[k], &used));
      }
      const long label = std::stol(cells.back());
      if (label < 0) throw std::out_of_range("negative label");
      ex.label = static_cast<std::uint32_t>(label);
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": malformed value");
    }
    out.push_back(std::move(ex));
  }
  if (out.empty()) throw IoError(path.string() + ": no data rows");
  return out;
}

}  // namespace fedagg
