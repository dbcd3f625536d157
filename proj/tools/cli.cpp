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

#include "cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <vector>

#include <CLI11.hpp>

#include "fedagg/config.hpp"
#include "fedagg/error.hpp"
#include "fedagg/orchestrator.hpp"

namespace fedagg {
namespace {

std::string valid_strategy_names() {
  std::string out;
  for (Strategy s : all_strategies()) out += (out.empty() ? "" : ", ") + std::string(strategy_name(s));
  return out;
}

void print_summary(const RunRecord& record, const ExperimentConfig& cfg, std::ostream& out) {
  out << std::left << std::setw(16) << "combination" << std::setw(14) << "strategy" << std::right
      << std::setw(10) << "accuracy" << std::setw(11) << "precision" << std::setw(10) << "f1"
      << std::setw(10) << "mcc" << "  status\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& cell : record.cells) {
    out << std::left << std::setw(16) << combination_label(cell.combination) << std::setw(14)
        << strategy_name(cell.strategy) << std::right;
    if (cell.rounds.empty()) {
      out << std::setw(41) << "-";
    } else {
      const auto& s = cell.rounds.back().scores;
      out << std::setw(10) << s.accuracy << std::setw(11) << s.precision << std::setw(10) << s.f1
          << std::setw(10) << s.mcc;
    }
    out << "  " << (cell.error ? "diverged: " + *cell.error : std::string("ok")) << "\n";
  }
  out << std::defaultfloat << std::setprecision(3) << "wrote " << record.cells.size() << " cells to "
      << cfg.out_dir.string() << " in " << record.seconds << " s\n";
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Federated aggregation simulator: dual-criterion weighting against baseline aggregators"};
  app.name("fedagg");

  std::string config_path;
  std::string strategy;
  std::string lambda_grid;
  std::size_t rounds = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t workers = 0;
  bool list_strategies = false;
  bool print_default = false;

  app.add_option("--config", config_path, "Experiment config file (INI); defaults are used when omitted");
  app.add_option("--strategy", strategy, "Run only this strategy (" + valid_strategy_names() + ")");
  app.add_option("--lambda-grid", lambda_grid, "Comma-separated ascending λ values in [0, 1]");
  auto* rounds_opt = app.add_option("--rounds", rounds, "Communication rounds per cell")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Global seed");
  app.add_option("--out-dir", out_dir, "Output directory");
  auto* workers_opt = app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--list-strategies", list_strategies, "Print the strategy names and exit");
  app.add_flag("--print-default-config", print_default, "Print the default config and exit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  if (list_strategies) {
    for (Strategy s : all_strategies()) out << strategy_name(s) << "\n";
    return 0;
  }
  if (print_default) {
    out << format_config(ExperimentConfig{});
    return 0;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!strategy.empty()) cfg.strategies = {parse_strategy(strategy)};
    if (!lambda_grid.empty()) cfg.lambda_grid = LambdaGrid(parse_real_list(lambda_grid));
    if (*rounds_opt) cfg.rounds = rounds;
    if (*seed_opt) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (*workers_opt) cfg.workers = workers;
    cfg.validate();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    const RunRecord record = run_sweep(cfg);
    print_summary(record, cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace fedagg
