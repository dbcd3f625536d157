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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fedagg/config.hpp"
#include "fedagg/error.hpp"
#include "fedagg/orchestrator.hpp"

using namespace fedagg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fedagg_orch_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.data.client_sizes = {120, 80, 60};
  cfg.data.noise_fractions = {0.4, 0.0, 0.0};
  cfg.data.evaluation_size = 100;
  cfg.data.validation_size = 100;
  cfg.combinations = {{1, 2, 3}};
  cfg.rounds = 4;
  cfg.out_dir = out;
  return cfg;
}

struct Fixture {
  ModelSpec spec{2, {}, 3};
  DataLayout layout;
  RoundContext ctx;

  Fixture() {
    ExperimentConfig cfg = small_config("unused");
    layout = build_layout(cfg);
    ctx.model = &spec;
    ctx.evaluation_set = layout.evaluation_set;
    ctx.validation_set = layout.validation_set;
    ctx.seed = 5;
  }
};

}  // namespace

TEST_CASE("client_seed") {
  CHECK(client_seed(1, SeedMode::PerClient, 2, 3) == client_seed(1, SeedMode::PerClient, 2, 3));
  CHECK(client_seed(1, SeedMode::PerClient, 2, 3) != client_seed(1, SeedMode::PerClient, 4, 3));
  CHECK(client_seed(1, SeedMode::PerClient, 2, 3) != client_seed(1, SeedMode::PerClient, 2, 4));
  CHECK(client_seed(1, SeedMode::Shared, 2, 3) == client_seed(1, SeedMode::Shared, 9, 3));
  CHECK(client_seed(1, SeedMode::Shared, 2, 3) != client_seed(1, SeedMode::Shared, 2, 4));
}

TEST_CASE("combination_label") {
  const std::vector<ClientId> c{1, 2, 3};
  CHECK(combination_label(c) == "c1-c2-c3");
}

TEST_CASE("run_round") {
  Fixture fx;
  const auto init = init_parameters(fx.spec, 1);

  SUBCASE("one client with simple averaging returns its trained model") {
    const std::vector<DatasetShard> one{fx.layout.shards[1]};
    auto momentum = MomentumState::zeros(init.size(), 0.9, 1.0);
    const auto out = run_round(init, one, Strategy::Simple, fx.ctx, 1, momentum);
    TrainConfig tc = fx.ctx.train;
    tc.seed = client_seed(fx.ctx.seed, fx.ctx.seed_mode, one[0].client_id, 1);
    CHECK(out.global.bit_equal(train_local(init, one[0], fx.spec, tc, 1)));
    CHECK(out.metrics.round == 1);
    CHECK(out.metrics.weights == std::vector<double>{1.0});
  }

  SUBCASE("dualcrit with the grid {0} reproduces weighted") {
    fx.ctx.lambda_grid = LambdaGrid({0.0});
    auto m1 = MomentumState::zeros(init.size(), 0.9, 1.0);
    auto m2 = m1;
    const auto a = run_round(init, fx.layout.shards, Strategy::DualCrit, fx.ctx, 1, m1);
    const auto b = run_round(init, fx.layout.shards, Strategy::Weighted, fx.ctx, 1, m2);
    CHECK(a.global.bit_equal(b.global));
    CHECK(a.metrics.lambda == 0.0);
    CHECK(a.metrics.weights == b.metrics.weights);
  }

  SUBCASE("identical shards match a single client when seeds are shared") {
    fx.ctx.seed_mode = SeedMode::Shared;
    std::vector<DatasetShard> copies(3, fx.layout.shards[1]);
    for (std::size_t i = 0; i < 3; ++i) copies[i].client_id = static_cast<ClientId>(i + 1);
    const std::vector<DatasetShard> single{copies[0]};
    for (Strategy s : all_strategies()) {
      CAPTURE(strategy_name(s));
      auto m1 = MomentumState::zeros(init.size(), 0.9, 1.0);
      auto m2 = m1;
      auto g1 = init, g2 = init;
      for (std::uint32_t round = 1; round <= 3; ++round) {
        g1 = run_round(g1, copies, s, fx.ctx, round, m1).global;
        g2 = run_round(g2, single, s, fx.ctx, round, m2).global;
        CHECK(g1.bit_equal(g2));
      }
    }
  }

  SUBCASE("reported weights") {
    auto m = MomentumState::zeros(init.size(), 0.9, 1.0);
    CHECK(run_round(init, fx.layout.shards, Strategy::Median, fx.ctx, 1, m).metrics.weights.empty());
    const auto w = run_round(init, fx.layout.shards, Strategy::Weighted, fx.ctx, 1, m).metrics.weights;
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(120.0 / 260.0).epsilon(1e-15));
    const auto d = run_round(init, fx.layout.shards, Strategy::DualCrit, fx.ctx, 1, m);
    CHECK(d.metrics.lambda.has_value());
    CHECK_FALSE(run_round(init, fx.layout.shards, Strategy::Simple, fx.ctx, 1, m).metrics.lambda.has_value());
  }
}

TEST_CASE("run_sweep output shape and checkpoint semantics") {
  const auto dir = fresh_dir("shape");
  auto cfg = small_config(dir);
  cfg.rounds = 3;
  cfg.strategies = {Strategy::DualCrit};
  const auto record = run_sweep(cfg);
  REQUIRE(record.cells.size() == 1);
  const auto& cell = record.cells[0];
  CHECK_FALSE(cell.error.has_value());
  CHECK(cell.rounds.size() == 3);
  CHECK(cell.checkpoint_saves >= 1);
  CHECK(cell.checkpoint_saves <= 3);

  double best = -1.0;
  for (const auto& r : cell.rounds) best = std::max(best, r.scores.accuracy);
  CHECK(cell.best_accuracy == best);

  const auto layout = build_layout(cfg);
  const auto saved = load_checkpoint(dir / cell.checkpoint);
  CHECK(std::abs(evaluate_score(saved, layout.validation_set, cfg.model) - cell.best_accuracy) <= 1e-12);

  const auto csv = slurp(dir / cell.metrics_csv);
  CHECK(csv.rfind("round,accuracy,precision,f1,mcc,lambda_chosen,w_1,w_2,w_3\n", 0) == 0);
  CHECK(count_lines(csv) == 4);
  CHECK(fs::exists(dir / "weights_c1-c2-c3.log"));

  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  REQUIRE(summary["cells"].size() == 1);
  const auto& final_row = summary["cells"][0]["final"];
  for (const char* key : {"accuracy", "precision", "f1", "mcc", "lambda_chosen"}) CHECK(final_row.contains(key));
  fs::remove_all(dir);
}

TEST_CASE("run_sweep reruns are byte identical") {
  const auto a = fresh_dir("rerun_a");
  const auto b = fresh_dir("rerun_b");
  auto cfg = small_config(a);
  cfg.strategies = {Strategy::Momentum, Strategy::Dp, Strategy::DualCrit};
  run_sweep(cfg);
  cfg.out_dir = b;
  cfg.workers = 3;
  run_sweep(cfg);
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "summary.json") continue;
    CAPTURE(name.string());
    CHECK(slurp(entry.path()) == slurp(b / name));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("a diverging cell is recorded and the sweep carries on") {
  const auto dir = fresh_dir("diverge");
  auto cfg = small_config(dir);
  cfg.train.learning_rate = 1e308;
  cfg.train.local_epochs = 4;
  cfg.strategies = {Strategy::Simple, Strategy::Median};
  RunRecord record;
  CHECK_NOTHROW(record = run_sweep(cfg));
  REQUIRE(record.cells.size() == 2);
  for (const auto& cell : record.cells) {
    REQUIRE(cell.error.has_value());
    CHECK(cell.error->find("round 1") != std::string::npos);
  }
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["cells"][1]["status"] == "diverged");
  fs::remove_all(dir);
}

TEST_CASE("an unwritable output directory names the path") {
  const auto blocker = fresh_dir("blocker");
  std::ofstream(blocker) << "not a directory";
  auto cfg = small_config(blocker / "sub");
  cfg.rounds = 1;
  cfg.strategies = {Strategy::Simple};
  try {
    run_sweep(cfg);
    FAIL("expected an I/O failure");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
  }
  fs::remove(blocker);
}
