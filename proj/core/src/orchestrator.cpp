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

#include "fedagg/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fedagg/error.hpp"
#include "fedagg/learner.hpp"
#include "fedagg/random.hpp"

namespace fedagg {
namespace {

// Tags keep the derived seed streams apart.
constexpr std::uint64_t kTrainTag = 0x545241494EULL;
constexpr std::uint64_t kNoiseTag = 0x4E4F495345ULL;
constexpr std::uint64_t kInitTag = 0x494E4954ULL;
constexpr std::uint64_t kDataTag = 0x44415441ULL;
constexpr std::uint64_t kLayoutTag = 0x4C41594FULL;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs fn(0..n-1) on up to `workers` threads. Exceptions are rethrown
// lowest index first, so failures are reported the same way at any width.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string fmt_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::vector<double> uniform_weights(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

std::vector<double> quantity_weights(std::span<const ClientReport> sorted) {
  std::vector<std::size_t> sizes;
  for (const auto& r : sorted) sizes.push_back(r.size);
  return normalize_weights(quantity_factors(sizes));
}

std::string metrics_header(std::span<const ClientId> combination) {
  std::string h = "round,accuracy,precision,f1,mcc,lambda_chosen";
  std::vector<ClientId> ids(combination.begin(), combination.end());
  std::sort(ids.begin(), ids.end());
  for (ClientId id : ids) h += ",w_" + std::to_string(id);
  return h;
}

std::string metrics_row(const RoundMetrics& m, std::size_t num_clients) {
  std::string row = std::to_string(m.round) + "," + fmt_real(m.scores.accuracy) + "," +
                    fmt_real(m.scores.precision) + "," + fmt_real(m.scores.f1) + "," + fmt_real(m.scores.mcc) +
                    "," + (m.lambda ? fmt_real(*m.lambda) : std::string());
  for (std::size_t i = 0; i < num_clients; ++i) {
    row += ",";
    if (i < m.weights.size()) row += fmt_real(m.weights[i]);
  }
  return row;
}

std::vector<DatasetShard> select_clients(const DataLayout& layout, std::span<const ClientId> combination) {
  std::vector<DatasetShard> out;
  for (ClientId id : combination) {
    auto it = std::find_if(layout.shards.begin(), layout.shards.end(),
                           [&](const DatasetShard& s) { return s.client_id == id; });
    if (it == layout.shards.end()) throw ConfigError("no client with id " + std::to_string(id));
    out.push_back(*it);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("failed writing: " + path.string());
}

}  // namespace

std::uint64_t client_seed(std::uint64_t seed, SeedMode mode, ClientId client, std::uint32_t round) {
  if (mode == SeedMode::Shared) return derive_seed({seed, kTrainTag, round});
  return derive_seed({seed, kTrainTag, client, round});
}

RoundOutcome run_round(const ParameterVector& global, std::span<const DatasetShard> clients, Strategy strategy,
                       const RoundContext& ctx, std::uint32_t round, MomentumState& momentum) {
  if (ctx.model == nullptr) throw std::invalid_argument("run_round: context has no model spec");
  if (clients.empty()) throw std::invalid_argument("run_round: no clients");
  const ModelSpec& spec = *ctx.model;

  std::vector<std::optional<ClientReport>> slots(clients.size());
  parallel_for(clients.size(), ctx.workers, [&](std::size_t i) {
    const DatasetShard& shard = clients[i];
    TrainConfig tc = ctx.train;
    tc.seed = client_seed(ctx.seed, ctx.seed_mode, shard.client_id, round);
    ParameterVector local = train_local(global, shard, spec, tc, round);
    const double score = evaluate_score(local, ctx.evaluation_set, spec);
    slots[i] = ClientReport{shard.client_id, std::move(local), score, shard.size()};
  });
  std::vector<ClientReport> reports;
  for (auto& s : slots) reports.push_back(std::move(*s));
  const auto sorted = canonical_order(reports);
  const std::size_t n = sorted.size();

  RoundMetrics metrics;
  metrics.round = round;
  std::optional<ParameterVector> next;
  switch (strategy) {
    case Strategy::Simple:
      next = simple_average(sorted);
      metrics.weights = uniform_weights(n);
      break;
    case Strategy::Weighted:
      next = weighted_mean(sorted);
      metrics.weights = quantity_weights(sorted);
      break;
    case Strategy::Median:
      next = median_aggregate(sorted);
      break;
    case Strategy::Momentum: {
      auto [g, state] = momentum_aggregate(sorted, global, momentum);
      next = std::move(g);
      momentum = std::move(state);
      metrics.weights = quantity_weights(sorted);
      break;
    }
    case Strategy::Personalized:
      next = personalized_aggregate(sorted, global, ctx.baseline.alpha);
      metrics.weights = uniform_weights(n);
      break;
    case Strategy::Dp:
      next = dp_average(sorted, ctx.baseline.epsilon, derive_seed({ctx.seed, kNoiseTag, ctx.baseline.noise_seed, round}));
      metrics.weights = uniform_weights(n);
      break;
    case Strategy::Quantized:
      next = quantize_aggregate(sorted, ctx.baseline.q_level);
      metrics.weights = uniform_weights(n);
      break;
    case Strategy::DualCrit: {
      auto sel = select_lambda(sorted, ctx.lambda_grid, ctx.validation_set, spec);
      next = std::move(sel.parameters);
      metrics.lambda = sel.lambda;
      metrics.weights = std::move(sel.weights.w);
      break;
    }
  }

  std::vector<std::uint32_t> truth;
  truth.reserve(ctx.validation_set.size());
  for (const auto& ex : ctx.validation_set) truth.push_back(ex.label);
  const auto pred = predict_all(*next, ctx.validation_set, spec);
  metrics.scores = score_all(pred, truth, spec.num_classes, ctx.averaging);
  return RoundOutcome{std::move(*next), std::move(metrics)};
}

std::string combination_label(std::span<const ClientId> combination) {
  std::string out;
  for (std::size_t i = 0; i < combination.size(); ++i) out += (i ? "-c" : "c") + std::to_string(combination[i]);
  return out;
}

DataLayout build_layout(const ExperimentConfig& cfg) {
  LayoutSpec ls{cfg.data.client_sizes, cfg.data.noise_fractions, cfg.data.evaluation_size,
                cfg.data.validation_size};
  std::size_t total = cfg.data.evaluation_size + cfg.data.validation_size;
  for (auto s : cfg.data.client_sizes) total += s;

  std::vector<Example> pool;
  if (cfg.data.source == "csv") {
    pool = load_csv(cfg.data.csv_path);
    for (const auto& ex : pool) {
      if (ex.features.size() != cfg.model.input_dim || ex.label >= cfg.model.num_classes) {
        throw ConfigError(cfg.data.csv_path.string() + ": row " + std::to_string(ex.id + 1) +
                          " does not match model.input_dim / model.num_classes");
      }
    }
  } else {
    SyntheticSpec ss{total, cfg.model.input_dim, cfg.model.num_classes, cfg.data.cluster_radius};
    pool = generate_synthetic(ss, derive_seed({cfg.seed, kDataTag}));
  }
  return make_layout(pool, ls, cfg.model.num_classes, derive_seed({cfg.seed, kLayoutTag}));
}

RunRecord run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto sweep_start = Clock::now();
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());

  const DataLayout layout = build_layout(cfg);
  const ParameterVector initial = init_parameters(cfg.model, derive_seed({cfg.seed, kInitTag}));

  RunRecord record;
  for (const auto& comb : cfg.combinations) {
    for (Strategy s : cfg.strategies) {
      CellResult cell;
      cell.combination = comb;
      cell.strategy = s;
      const std::string stem = combination_label(comb) + "_" + std::string(strategy_name(s));
      cell.metrics_csv = "metrics_" + stem + ".csv";
      cell.checkpoint = "checkpoint_" + stem + ".fagg";
      record.cells.push_back(std::move(cell));
    }
  }

  // Cells run in parallel when there are several; otherwise the workers go
  // to client training inside the single cell.
  const std::size_t cell_workers = record.cells.size() > 1 ? cfg.workers : 1;
  const std::size_t client_workers = record.cells.size() > 1 ? 1 : cfg.workers;

  parallel_for(record.cells.size(), cell_workers, [&](std::size_t idx) {
    CellResult& cell = record.cells[idx];
    const auto cell_start = Clock::now();
    const auto clients = select_clients(layout, cell.combination);

    RoundContext ctx;
    ctx.model = &cfg.model;
    ctx.train = cfg.train;
    ctx.evaluation_set = layout.evaluation_set;
    ctx.validation_set = layout.validation_set;
    ctx.baseline = cfg.baseline;
    ctx.lambda_grid = cfg.lambda_grid;
    ctx.averaging = cfg.averaging;
    ctx.seed = cfg.seed;
    ctx.seed_mode = cfg.seed_mode;
    ctx.workers = client_workers;

    const auto csv_path = cfg.out_dir / cell.metrics_csv;
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw IoError("cannot open for writing: " + csv_path.string());
    csv << metrics_header(cell.combination) << "\n" << std::flush;

    ParameterVector global = initial;
    MomentumState momentum = MomentumState::zeros(global.size(), cfg.baseline.beta, cfg.baseline.eta);
    for (std::uint32_t k = 1; k <= cfg.rounds; ++k) {
      try {
        auto outcome = run_round(global, clients, cell.strategy, ctx, k, momentum);
        global = std::move(outcome.global);
        csv << metrics_row(outcome.metrics, clients.size()) << "\n" << std::flush;
        if (!csv) throw IoError("failed writing: " + csv_path.string());
        if (outcome.metrics.scores.accuracy > cell.best_accuracy) {
          cell.best_accuracy = outcome.metrics.scores.accuracy;
          cell.best_round = k;
          save_checkpoint(cfg.out_dir / cell.checkpoint, global);
          ++cell.checkpoint_saves;
        }
        cell.rounds.push_back(std::move(outcome.metrics));
      } catch (const TrainingError& e) {
        cell.error = e.what();
        break;
      }
    }
    cell.seconds = seconds_since(cell_start);
  });

  // Per-round weight log, one file per combination.
  std::map<std::string, std::string> logs;
  for (const auto& cell : record.cells) {
    const std::string label = combination_label(cell.combination);
    auto& text = logs[label];
    if (text.empty()) {
      std::string header = metrics_header(cell.combination);
      text = "round,strategy,lambda_chosen" + header.substr(header.find(",w_") == std::string::npos
                                                                 ? header.size()
                                                                 : header.find(",w_")) + "\n";
    }
    for (const auto& m : cell.rounds) {
      text += std::to_string(m.round) + "," + std::string(strategy_name(cell.strategy)) + "," +
              (m.lambda ? fmt_real(*m.lambda) : std::string());
      for (std::size_t i = 0; i < cell.combination.size(); ++i) {
        text += ",";
        if (i < m.weights.size()) text += fmt_real(m.weights[i]);
      }
      text += "\n";
    }
  }
  for (const auto& [label, text] : logs) write_text(cfg.out_dir / ("weights_" + label + ".log"), text);

  nlohmann::ordered_json summary;
  summary["seed"] = cfg.seed;
  summary["rounds"] = cfg.rounds;
  summary["averaging"] = std::string(to_string(cfg.averaging));
  summary["cells"] = nlohmann::ordered_json::array();
  for (const auto& cell : record.cells) {
    nlohmann::ordered_json j;
    j["combination"] = combination_label(cell.combination);
    j["clients"] = cell.combination;
    j["strategy"] = std::string(strategy_name(cell.strategy));
    j["status"] = cell.error ? "diverged" : "ok";
    if (cell.error) j["error"] = *cell.error;
    j["rounds_completed"] = cell.rounds.size();
    if (!cell.rounds.empty()) {
      const auto& last = cell.rounds.back();
      j["final"] = {{"round", last.round},
                    {"accuracy", last.scores.accuracy},
                    {"precision", last.scores.precision},
                    {"f1", last.scores.f1},
                    {"mcc", last.scores.mcc}};
      if (last.lambda) j["final"]["lambda_chosen"] = *last.lambda;
      j["best"] = {{"round", cell.best_round}, {"accuracy", cell.best_accuracy}};
      j["checkpoint"] = cell.checkpoint.string();
    }
    j["checkpoint_saves"] = cell.checkpoint_saves;
    j["metrics_csv"] = cell.metrics_csv.string();
    summary["cells"].push_back(std::move(j));
  }
  write_text(cfg.out_dir / "summary.json", summary.dump(2) + "\n");

  record.seconds = seconds_since(sweep_start);
  return record;
}

}  // namespace fedagg
