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

#include "fedagg/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fedagg/error.hpp"

namespace fedagg {
namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kStrategyNames[] = {"simple",       "weighted", "median",    "momentum",
                                               "personalized", "dp",       "quantized", "dualcrit"};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model.input_dim",       "model.hidden_dims",     "model.num_classes",
      "train.learning_rate",   "train.local_epochs",    "train.batch_size",
      "data.source",           "data.csv_path",         "data.cluster_radius",
      "data.client_sizes",     "data.noise_fractions",  "data.evaluation_size",
      "data.validation_size",  "sweep.rounds",          "sweep.combinations",
      "sweep.seed",            "sweep.seed_mode",       "sweep.workers",
      "sweep.out_dir",         "sweep.averaging",       "strategies.names",
      "strategies.lambda_grid", "strategies.alpha",     "strategies.epsilon",
      "strategies.q_level",    "strategies.beta",       "strategies.eta",
      "strategies.noise_seed",
  };
  return keys;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss{std::string(text)};
  if (boost::algorithm::trim_copy(std::string(text)).empty()) return out;
  while (std::getline(ss, cur, sep)) {
    boost::algorithm::trim(cur);
    if (cur.empty()) throw ConfigError("empty element in list '" + std::string(text) + "'");
    out.push_back(cur);
  }
  return out;
}

template <class T>
T parse_number(std::string_view text, std::string_view key) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return value;
}

template <class T>
std::string join(const std::vector<T>& xs, std::string_view sep = ",") {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? sep : "") << xs[i];
  return out.str();
}

std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::string join_reals(std::span<const double> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_real(xs[i]);
  return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text, std::string_view key) {
  std::vector<std::size_t> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number<std::size_t>(item, key));
  return out;
}

}  // namespace

const std::vector<Strategy>& all_strategies() {
  static const std::vector<Strategy> all = {Strategy::Simple,   Strategy::Weighted,     Strategy::Median,
                                            Strategy::Momentum, Strategy::Personalized, Strategy::Dp,
                                            Strategy::Quantized, Strategy::DualCrit};
  return all;
}

std::string_view strategy_name(Strategy s) { return kStrategyNames[static_cast<int>(s)]; }

Strategy parse_strategy(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kStrategyNames); ++i) {
    if (kStrategyNames[i] == name) return static_cast<Strategy>(i);
  }
  std::string valid;
  for (auto n : kStrategyNames) valid += (valid.empty() ? "" : ", ") + std::string(n);
  throw ConfigError("unknown strategy '" + std::string(name) + "'; valid names: " + valid);
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number<double>(item, "list"));
  return out;
}

std::vector<std::vector<ClientId>> parse_combinations(std::string_view text) {
  std::vector<std::vector<ClientId>> out;
  for (const auto& group : split(text, ';')) {
    std::vector<ClientId> ids;
    for (const auto& item : split(group, ',')) {
      std::string id = item;
      if (!id.empty() && (id.front() == 'c' || id.front() == 'C')) id.erase(0, 1);
      ids.push_back(parse_number<ClientId>(id, "sweep.combinations"));
    }
    out.push_back(std::move(ids));
  }
  return out;
}

void ExperimentConfig::validate() const {
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(train.learning_rate >= 0.0)) throw ConfigError("train.learning_rate must be >= 0");
  if (train.local_epochs == 0) throw ConfigError("train.local_epochs must be >= 1");
  if (train.batch_size == 0) throw ConfigError("train.batch_size must be >= 1");
  if (data.source != "synthetic" && data.source != "csv") {
    throw ConfigError("data.source must be 'synthetic' or 'csv', got '" + data.source + "'");
  }
  if (data.source == "csv" && data.csv_path.empty()) throw ConfigError("data.csv_path is required for csv source");
  if (data.client_sizes.empty()) throw ConfigError("data.client_sizes must list at least one client");
  for (auto s : data.client_sizes) {
    if (s == 0) throw ConfigError("data.client_sizes entries must be >= 1");
  }
  if (!data.noise_fractions.empty() && data.noise_fractions.size() != data.client_sizes.size()) {
    throw ConfigError("data.noise_fractions must have one entry per client");
  }
  for (double f : data.noise_fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("data.noise_fractions entries must be in [0, 1]");
  }
  if (data.evaluation_size == 0 || data.validation_size == 0) {
    throw ConfigError("data.evaluation_size and data.validation_size must be >= 1");
  }
  if (rounds == 0) throw ConfigError("sweep.rounds must be >= 1");
  if (combinations.empty()) throw ConfigError("sweep.combinations must not be empty");
  for (const auto& comb : combinations) {
    if (comb.empty()) throw ConfigError("sweep.combinations: empty combination");
    std::set<ClientId> seen;
    for (ClientId id : comb) {
      if (id == 0 || id > data.client_sizes.size()) {
        throw ConfigError("sweep.combinations: client " + std::to_string(id) + " does not exist (have " +
                          std::to_string(data.client_sizes.size()) + " clients)");
      }
      if (!seen.insert(id).second) throw ConfigError("sweep.combinations: client listed twice");
    }
  }
  if (strategies.empty()) throw ConfigError("strategies.names must not be empty");
  if (workers == 0) throw ConfigError("sweep.workers must be >= 1");
  if (!(baseline.alpha >= 0.0 && baseline.alpha <= 1.0)) throw ConfigError("strategies.alpha must be in [0, 1]");
  if (!(baseline.epsilon > 0.0)) throw ConfigError("strategies.epsilon must be > 0");
  if (baseline.q_level < 1 || baseline.q_level > 52) throw ConfigError("strategies.q_level must be in [1, 52]");
  if (!(baseline.beta >= 0.0 && baseline.beta < 1.0)) throw ConfigError("strategies.beta must be in [0, 1)");
  if (!(baseline.eta >= 0.0)) throw ConfigError("strategies.eta must be >= 0");
}

ExperimentConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }

  std::map<std::string, std::string> kv;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config key '" + section + "' must appear inside a [section]");
    }
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      if (!known_keys().contains(full)) throw ConfigError("unknown config key '" + full + "'");
      kv[full] = boost::algorithm::trim_copy(node.data());
    }
  }

  ExperimentConfig cfg;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  try {
    if (auto v = get("model.input_dim")) cfg.model.input_dim = parse_number<std::size_t>(*v, "model.input_dim");
    if (auto v = get("model.hidden_dims")) cfg.model.hidden_dims = parse_count_list(*v, "model.hidden_dims");
    if (auto v = get("model.num_classes")) cfg.model.num_classes = parse_number<std::size_t>(*v, "model.num_classes");
    if (auto v = get("train.learning_rate")) cfg.train.learning_rate = parse_number<double>(*v, "train.learning_rate");
    if (auto v = get("train.local_epochs")) cfg.train.local_epochs = parse_number<std::size_t>(*v, "train.local_epochs");
    if (auto v = get("train.batch_size")) cfg.train.batch_size = parse_number<std::size_t>(*v, "train.batch_size");
    if (auto v = get("data.source")) cfg.data.source = *v;
    if (auto v = get("data.csv_path")) cfg.data.csv_path = *v;
    if (auto v = get("data.cluster_radius")) cfg.data.cluster_radius = parse_number<double>(*v, "data.cluster_radius");
    if (auto v = get("data.client_sizes")) cfg.data.client_sizes = parse_count_list(*v, "data.client_sizes");
    if (auto v = get("data.noise_fractions")) cfg.data.noise_fractions = parse_real_list(*v);
    if (auto v = get("data.evaluation_size")) cfg.data.evaluation_size = parse_number<std::size_t>(*v, "data.evaluation_size");
    if (auto v = get("data.validation_size")) cfg.data.validation_size = parse_number<std::size_t>(*v, "data.validation_size");
    if (auto v = get("sweep.rounds")) cfg.rounds = parse_number<std::size_t>(*v, "sweep.rounds");
    if (auto v = get("sweep.combinations")) cfg.combinations = parse_combinations(*v);
    if (auto v = get("sweep.seed")) cfg.seed = parse_number<std::uint64_t>(*v, "sweep.seed");
    if (auto v = get("sweep.seed_mode")) {
      if (*v == "per_client") {
        cfg.seed_mode = SeedMode::PerClient;
      } else if (*v == "shared") {
        cfg.seed_mode = SeedMode::Shared;
      } else {
        throw ConfigError("sweep.seed_mode must be per_client or shared");
      }
    }
    if (auto v = get("sweep.workers")) cfg.workers = parse_number<std::size_t>(*v, "sweep.workers");
    if (auto v = get("sweep.out_dir")) cfg.out_dir = *v;
    if (auto v = get("sweep.averaging")) cfg.averaging = parse_averaging(*v);
    if (auto v = get("strategies.names")) {
      cfg.strategies.clear();
      for (const auto& name : split(*v, ',')) cfg.strategies.push_back(parse_strategy(name));
    }
    if (auto v = get("strategies.lambda_grid")) cfg.lambda_grid = LambdaGrid(parse_real_list(*v));
    if (auto v = get("strategies.alpha")) cfg.baseline.alpha = parse_number<double>(*v, "strategies.alpha");
    if (auto v = get("strategies.epsilon")) cfg.baseline.epsilon = parse_number<double>(*v, "strategies.epsilon");
    if (auto v = get("strategies.q_level")) cfg.baseline.q_level = parse_number<unsigned>(*v, "strategies.q_level");
    if (auto v = get("strategies.beta")) cfg.baseline.beta = parse_number<double>(*v, "strategies.beta");
    if (auto v = get("strategies.eta")) cfg.baseline.eta = parse_number<double>(*v, "strategies.eta");
    if (auto v = get("strategies.noise_seed")) cfg.baseline.noise_seed = parse_number<std::uint64_t>(*v, "strategies.noise_seed");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::vector<std::string> combos;
  for (const auto& c : cfg.combinations) combos.push_back(join(c));
  std::vector<std::string> names;
  for (auto s : cfg.strategies) names.emplace_back(strategy_name(s));

  out << "# fedagg experiment configuration\n"
      << "\n[model]\n"
      << "input_dim = " << cfg.model.input_dim << "\n"
      << "# comma-separated ReLU layer widths; empty means logistic regression\n"
      << "hidden_dims = " << join(cfg.model.hidden_dims) << "\n"
      << "num_classes = " << cfg.model.num_classes << "\n"
      << "\n[train]\n"
      << "learning_rate = " << format_real(cfg.train.learning_rate) << "\n"
      << "local_epochs = " << cfg.train.local_epochs << "\n"
      << "batch_size = " << cfg.train.batch_size << "\n"
      << "\n[data]\n"
      << "# synthetic or csv\n"
      << "source = " << cfg.data.source << "\n"
      << "csv_path = " << cfg.data.csv_path.string() << "\n"
      << "cluster_radius = " << format_real(cfg.data.cluster_radius) << "\n"
      << "# one entry per client; client ids are 1-based positions in this list\n"
      << "client_sizes = " << join(cfg.data.client_sizes) << "\n"
      << "noise_fractions = " << join_reals(cfg.data.noise_fractions) << "\n"
      << "evaluation_size = " << cfg.data.evaluation_size << "\n"
      << "validation_size = " << cfg.data.validation_size << "\n"
      << "\n[sweep]\n"
      << "rounds = " << cfg.rounds << "\n"
      << "combinations = " << join(combos, ";") << "\n"
      << "seed = " << cfg.seed << "\n"
      << "# per_client or shared\n"
      << "seed_mode = " << (cfg.seed_mode == SeedMode::PerClient ? "per_client" : "shared") << "\n"
      << "workers = " << cfg.workers << "\n"
      << "out_dir = " << cfg.out_dir.string() << "\n"
      << "# macro or micro\n"
      << "averaging = " << to_string(cfg.averaging) << "\n"
      << "\n[strategies]\n"
      << "names = " << join(names) << "\n"
      << "lambda_grid = " << join_reals(cfg.lambda_grid.values()) << "\n"
      << "alpha = " << format_real(cfg.baseline.alpha) << "\n"
      << "epsilon = " << format_real(cfg.baseline.epsilon) << "\n"
      << "q_level = " << cfg.baseline.q_level << "\n"
      << "beta = " << format_real(cfg.baseline.beta) << "\n"
      << "eta = " << format_real(cfg.baseline.eta) << "\n"
      << "noise_seed = " << cfg.baseline.noise_seed << "\n";
  return out.str();
}

}  // namespace fedagg
