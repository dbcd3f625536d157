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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedagg/baselines.hpp"
#include "fedagg/config.hpp"
#include "fedagg/data.hpp"
#include "fedagg/dualcrit.hpp"
#include "fedagg/metrics.hpp"
#include "fedagg/params.hpp"

namespace fedagg {

struct RoundMetrics {
  std::uint32_t round = 0;  // 1-based
  Scores scores;            // on the validation set
  std::optional<double> lambda;
  // Coefficient applied to each participating client (canonical order) in
  // the averaging step; empty for median.
  std::vector<double> weights;
};

/// Everything run_round needs besides the global model and the clients.
struct RoundContext {
  const ModelSpec* model = nullptr;
  TrainConfig train;  // seed is ignored; each client gets a derived seed
  std::span<const Example> evaluation_set;
  std::span<const Example> validation_set;
  BaselineConfig baseline;
  LambdaGrid lambda_grid = LambdaGrid::standard();
  Averaging averaging = Averaging::Macro;
  std::uint64_t seed = 0;
  SeedMode seed_mode = SeedMode::PerClient;
  std::size_t workers = 1;  // client training threads
};

struct RoundOutcome {
  ParameterVector global;
  RoundMetrics metrics;
};

/// Training seed for one client in one round. Independent of which other
/// clients take part, so combination sweeps share no hidden state.
std::uint64_t client_seed(std::uint64_t seed, SeedMode mode, ClientId client, std::uint32_t round);

/// One communication round: every client trains from a copy of `global`,
/// scores itself on the evaluation set, reports; the strategy aggregates;
/// the new global is scored on the validation set. `momentum` is read and
/// updated only by the momentum strategy. Throws TrainingError on divergence.
RoundOutcome run_round(const ParameterVector& global, std::span<const DatasetShard> clients, Strategy strategy,
                       const RoundContext& ctx, std::uint32_t round, MomentumState& momentum);

struct CellResult {
  std::vector<ClientId> combination;
  Strategy strategy = Strategy::Simple;
  std::vector<RoundMetrics> rounds;
  std::optional<std::string> error;  // set when training diverged; rounds holds what finished
  std::size_t checkpoint_saves = 0;
  std::uint32_t best_round = 0;
  double best_accuracy = -1.0;
  std::filesystem::path checkpoint;  // relative to the output directory
  std::filesystem::path metrics_csv;
  double seconds = 0.0;
};

struct RunRecord {
  std::vector<CellResult> cells;  // combination-major, then strategy, in config order
  double seconds = 0.0;
};

/// "c1-c2-c3"
std::string combination_label(std::span<const ClientId> combination);

/// Builds data (synthetic or CSV) and the shard/evaluation/validation split
/// exactly as run_sweep does.
DataLayout build_layout(const ExperimentConfig& cfg);

/// For each combination, for each strategy, K rounds from the same initial
/// model. After every round the CSV row is flushed and the global model is
/// checkpointed when validation accuracy strictly improves. Writes
/// metrics_<comb>_<strategy>.csv, checkpoint_<comb>_<strategy>.fagg,
/// weights_<comb>.log and summary.json into cfg.out_dir. Output bytes depend
/// only on the config, not on cfg.workers.
RunRecord run_sweep(const ExperimentConfig& cfg);

}  // namespace fedagg
