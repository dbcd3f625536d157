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
#include <string>
#include <string_view>
#include <vector>

#include "fedagg/baselines.hpp"
#include "fedagg/data.hpp"
#include "fedagg/dualcrit.hpp"
#include "fedagg/learner.hpp"
#include "fedagg/metrics.hpp"

namespace fedagg {

enum class Strategy { Simple, Weighted, Median, Momentum, Personalized, Dp, Quantized, DualCrit };

/// simple, weighted, median, momentum, personalized, dp, quantized, dualcrit
const std::vector<Strategy>& all_strategies();
std::string_view strategy_name(Strategy s);
/// Throws ConfigError listing the valid names.
Strategy parse_strategy(std::string_view name);

// PerClient derives each client's training seed from (seed, client, round).
// Shared drops the client id; it exists for tests that need identical
// clients to train identically.
enum class SeedMode { PerClient, Shared };

struct DataConfig {
  std::string source = "synthetic";  // or "csv"
  std::filesystem::path csv_path;
  double cluster_radius = 1.5;
  std::vector<std::size_t> client_sizes{400, 400, 400, 400};
  std::vector<double> noise_fractions{0.4, 0.0, 0.0, 0.0};
  std::size_t evaluation_size = 600;
  std::size_t validation_size = 600;
};

struct ExperimentConfig {
  ModelSpec model{2, {}, 3};
  TrainConfig train;
  DataConfig data;
  std::size_t rounds = 30;
  std::vector<std::vector<ClientId>> combinations{{1, 2, 3}, {1, 2, 3, 4}};
  std::vector<Strategy> strategies = all_strategies();
  BaselineConfig baseline;
  LambdaGrid lambda_grid = LambdaGrid::standard();
  Averaging averaging = Averaging::Macro;
  std::uint64_t seed = 42;
  SeedMode seed_mode = SeedMode::PerClient;
  std::size_t workers = 1;
  std::filesystem::path out_dir = "results";

  /// Throws ConfigError on any out-of-range value or dangling client id.
  void validate() const;
};

/// INI-style text: `[section]` headers (model, train, data, sweep,
/// strategies), `key = value` lines, `#` or `;` comments. Lists are comma
/// separated; combinations are `;`-separated lists of client ids. Unknown
/// sections or keys are rejected. Missing keys keep their defaults.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Round-trips through parse_config.
std::string format_config(const ExperimentConfig& cfg);

std::vector<double> parse_real_list(std::string_view text);
std::vector<std::vector<ClientId>> parse_combinations(std::string_view text);

}  // namespace fedagg
