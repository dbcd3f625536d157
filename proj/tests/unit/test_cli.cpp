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
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = fedagg::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("--list-strategies prints the eight names") {
  const auto r = run({"--list-strategies"});
  CHECK(r.code == 0);
  CHECK(r.out == "simple\nweighted\nmedian\nmomentum\npersonalized\ndp\nquantized\ndualcrit\n");
}

TEST_CASE("--print-default-config is a loadable config") {
  const auto r = run({"--print-default-config"});
  CHECK(r.code == 0);
  const auto path = fs::temp_directory_path() / "fedagg_cli_default.ini";
  std::ofstream(path) << r.out;
  const auto dir = fs::temp_directory_path() / "fedagg_cli_default_out";
  fs::remove_all(dir);
  const auto run_r = run({"--config", path.string(), "--strategy", "simple", "--rounds", "1", "--out-dir",
                          dir.string()});
  CHECK(run_r.code == 0);
  CHECK(fs::exists(dir / "summary.json"));
  fs::remove(path);
  fs::remove_all(dir);
}

TEST_CASE("single-strategy smoke run") {
  const auto path = fs::temp_directory_path() / "fedagg_cli_smoke.ini";
  std::ofstream(path) << "[data]\nclient_sizes = 100,100,100\nnoise_fractions = 0.4,0,0\n"
                         "evaluation_size = 150\nvalidation_size = 150\n[sweep]\ncombinations = 1,2,3\n";
  const auto dir = fs::temp_directory_path() / "fedagg_cli_smoke_out";
  fs::remove_all(dir);
  const auto r = run({"--config", path.string(), "--strategy", "dualcrit", "--rounds", "10", "--seed", "42",
                      "--out-dir", dir.string(), "--lambda-grid", "0,0.5,1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("dualcrit") != std::string::npos);
  std::ifstream csv(dir / "metrics_c1-c2-c3_dualcrit.csv");
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 10);
  fs::remove(path);
  fs::remove_all(dir);
}

TEST_CASE("missing config is an error naming the path") {
  const auto r = run({"--config", "/no/such/fedagg.ini"});
  CHECK(r.code != 0);
  CHECK(r.err.find("/no/such/fedagg.ini") != std::string::npos);
}

TEST_CASE("unknown strategy is a usage error listing valid names") {
  const auto r = run({"--strategy", "fedprox"});
  CHECK(r.code == 2);
  CHECK(r.err.find("fedprox") != std::string::npos);
  CHECK(r.err.find("dualcrit") != std::string::npos);
  CHECK(r.err.find("quantized") != std::string::npos);
}

TEST_CASE("malformed flags") {
  CHECK(run({"--rounds", "0"}).code == 2);
  CHECK(run({"--lambda-grid", "0.9,0.1"}).code == 2);
  CHECK(run({"--bogus"}).code == 2);
}
