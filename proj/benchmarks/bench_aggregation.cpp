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

#include <benchmark/benchmark.h>

#include <vector>

#include "fedagg/baselines.hpp"
#include "fedagg/data.hpp"
#include "fedagg/dualcrit.hpp"
#include "fedagg/learner.hpp"
#include "fedagg/random.hpp"

namespace {

using namespace fedagg;

std::vector<ClientReport> make_reports(std::size_t clients, std::size_t length) {
  Rng rng(17);
  std::vector<ClientReport> out;
  for (std::size_t i = 0; i < clients; ++i) {
    std::vector<double> p(length);
    for (double& x : p) x = rng.uniform(-1.0, 1.0);
    out.push_back({static_cast<ClientId>(i + 1), ParameterVector(std::move(p)), rng.uniform01(), 100 + i * 37});
  }
  return out;
}

void BM_WeightedSum(benchmark::State& state) {
  const auto reports = make_reports(static_cast<std::size_t>(state.range(0)), 10000);
  const auto ps = parameters_of(reports);
  std::vector<double> ws(ps.size(), 0.0);
  for (std::size_t i = 0; i < ws.size(); ++i) ws[i] = static_cast<double>(i + 1);
  ws = normalize_weights(ws);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_sum(ps, ws));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10000);
}
BENCHMARK(BM_WeightedSum)->Arg(4)->Arg(16)->Arg(64);

void BM_Median(benchmark::State& state) {
  const auto reports = make_reports(static_cast<std::size_t>(state.range(0)), 10000);
  for (auto _ : state) benchmark::DoNotOptimize(median_aggregate(reports));
}
BENCHMARK(BM_Median)->Arg(4)->Arg(16)->Arg(64);

void BM_Quantize(benchmark::State& state) {
  const auto reports = make_reports(8, 10000);
  for (auto _ : state) benchmark::DoNotOptimize(quantize_aggregate(reports, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_Quantize)->Arg(4)->Arg(8)->Arg(16);

void BM_SelectLambda(benchmark::State& state) {
  const ModelSpec spec{2, {}, 3};
  const auto validation = generate_synthetic(600, 2, 3, 5);
  const auto reports = make_reports(4, spec.parameter_count());
  const auto grid = LambdaGrid::standard();
  for (auto _ : state) benchmark::DoNotOptimize(select_lambda(reports, grid, validation, spec));
}
BENCHMARK(BM_SelectLambda);

void BM_TrainLocal(benchmark::State& state) {
  const ModelSpec spec{2, {static_cast<std::size_t>(state.range(0))}, 3};
  DatasetShard shard;
  shard.client_id = 1;
  shard.examples = generate_synthetic(400, 2, 3, 9);
  const auto init = init_parameters(spec, 1);
  TrainConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(train_local(init, shard, spec, cfg));
  state.SetItemsProcessed(state.iterations() * 400);
}
BENCHMARK(BM_TrainLocal)->Arg(1)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
