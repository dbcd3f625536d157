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
#include <span>
#include <vector>

namespace fedagg {

using ClientId = std::uint32_t;

struct Example {
  std::uint64_t id = 0;  // identity within the source dataset; used for disjointness
  std::vector<double> features;
  std::uint32_t label = 0;
};

struct DatasetShard {
  ClientId client_id = 0;
  std::vector<Example> examples;
  double noise_fraction = 0.0;  // fraction of labels re-drawn, as applied

  std::size_t size() const noexcept { return examples.size(); }
};

/// Client shards plus the two server-held sets. The evaluation set produces
/// each client's quality score; the validation set picks λ and ranks models.
struct DataLayout {
  std::vector<DatasetShard> shards;
  std::vector<Example> evaluation_set;
  std::vector<Example> validation_set;
};

struct SyntheticSpec {
  std::size_t num_examples = 0;
  std::size_t dims = 2;
  std::size_t num_classes = 2;
  // Class means sit on a circle of this radius in the first two coordinates
  // (a regular simplex for two or three classes); covariance is identity.
  double cluster_radius = 2.0;
};

/// Balanced labels, Gaussian features, order shuffled. Deterministic in seed.
std::vector<Example> generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);
std::vector<Example> generate_synthetic(std::size_t n, std::size_t dims, std::size_t classes,
                                        std::uint64_t seed);

/// Disjoint shards with exactly the requested sizes; shard i gets client id i + 1.
std::vector<DatasetShard> partition(std::span<const Example> data, std::span<const std::size_t> sizes,
                                    std::uint64_t seed);

/// Re-draws exactly round(fraction·size) labels (half away from zero),
/// uniformly among the other num_classes − 1 classes.
DatasetShard corrupt_labels(const DatasetShard& shard, double fraction, std::size_t num_classes,
                            std::uint64_t seed);

struct LayoutSpec {
  std::vector<std::size_t> client_sizes;
  std::vector<double> noise_fractions;  // one per client; empty means all clean
  std::size_t evaluation_size = 0;
  std::size_t validation_size = 0;
};

/// Splits `pool` into client shards, evaluation set, and validation set
/// (in that order after a seeded shuffle), then applies per-client label noise.
DataLayout make_layout(std::span<const Example> pool, const LayoutSpec& spec, std::size_t num_classes,
                       std::uint64_t seed);

/// CSV with a header row, `dims` feature columns, then an integer label column.
/// Example ids are the zero-based data row index.
std::vector<Example> load_csv(const std::filesystem::path& path);

}  // namespace fedagg
