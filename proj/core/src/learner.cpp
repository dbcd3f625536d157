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

#include "fedagg/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedagg/error.hpp"
#include "fedagg/random.hpp"

namespace fedagg {
namespace {

std::vector<std::size_t> layer_dims(const ModelSpec& spec) {
  std::vector<std::size_t> dims;
  dims.push_back(spec.input_dim);
  dims.insert(dims.end(), spec.hidden_dims.begin(), spec.hidden_dims.end());
  dims.push_back(spec.num_classes);
  return dims;
}

// Per-layer activations for one example. acts[0] is the input; acts[L] are
// the output logits. Hidden entries are post-ReLU.
struct Forward {
  std::vector<std::vector<double>> acts;
};

Forward forward(std::span<const double> params, std::span<const double> x,
                const std::vector<std::size_t>& dims) {
  Forward f;
  f.acts.reserve(dims.size());
  f.acts.emplace_back(x.begin(), x.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t in = dims[l];
    const std::size_t out = dims[l + 1];
    const double* w = params.data() + offset;
    const double* b = w + in * out;
    const auto& a = f.acts.back();
    std::vector<double> z(out);
    for (std::size_t r = 0; r < out; ++r) {
      double s = b[r];
      for (std::size_t c = 0; c < in; ++c) s += w[r * in + c] * a[c];
      z[r] = s;
    }
    const bool hidden = l + 2 < dims.size();
    if (hidden) {
      for (double& v : z) v = std::max(v, 0.0);
    }
    f.acts.push_back(std::move(z));
    offset += in * out + out;
  }
  return f;
}

// Softmax probabilities and -log p[label], computed stably.
double softmax_xent(std::span<const double> logits, std::uint32_t label, std::vector<double>& probs) {
  const double m = *std::max_element(logits.begin(), logits.end());
  probs.resize(logits.size());
  double z = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    probs[k] = std::exp(logits[k] - m);
    z += probs[k];
  }
  for (double& p : probs) p /= z;
  return -(logits[label] - m - std::log(z));
}

void check_inputs(std::span<const double> params, const ModelSpec& spec) {
  if (params.size() != spec.parameter_count()) {
    throw StructuralError("parameter length " + std::to_string(params.size()) +
                          " does not match model spec (" + std::to_string(spec.parameter_count()) + ")");
  }
}

void check_example(const Example& ex, const ModelSpec& spec) {
  if (ex.features.size() != spec.input_dim) {
    throw StructuralError("example " + std::to_string(ex.id) + " has " +
                          std::to_string(ex.features.size()) + " features, model expects " +
                          std::to_string(spec.input_dim));
  }
  if (ex.label >= spec.num_classes) {
    throw std::invalid_argument("example " + std::to_string(ex.id) + " label " +
                                std::to_string(ex.label) + " out of range");
  }
}

}  // namespace

std::size_t ModelSpec::parameter_count() const {
  const auto dims = layer_dims(*this);
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) n += dims[l] * dims[l + 1] + dims[l + 1];
  return n;
}

void ModelSpec::validate() const {
  if (input_dim == 0) throw std::invalid_argument("model: input_dim must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("model: num_classes must be >= 2");
  for (std::size_t h : hidden_dims) {
    if (h == 0) throw std::invalid_argument("model: hidden widths must be >= 1");
  }
}

ParameterVector init_parameters(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<double> v(spec.parameter_count());
  for (double& x : v) x = rng.uniform(-0.1, 0.1);
  return ParameterVector(std::move(v));
}

LossAndGradient loss_and_gradient(std::span<const double> params, std::span<const Example> batch,
                                  const ModelSpec& spec) {
  check_inputs(params, spec);
  if (batch.empty()) throw std::invalid_argument("loss_and_gradient: empty batch");
  const auto dims = layer_dims(spec);
  const std::size_t layers = dims.size() - 1;

  std::vector<std::size_t> offsets(layers);
  for (std::size_t l = 0, off = 0; l < layers; ++l) {
    offsets[l] = off;
    off += dims[l] * dims[l + 1] + dims[l + 1];
  }

  LossAndGradient out;
  out.gradient.assign(params.size(), 0.0);
  std::vector<double> probs;
  for (const Example& ex : batch) {
    check_example(ex, spec);
    const Forward f = forward(params, ex.features, dims);
    out.loss += softmax_xent(f.acts.back(), ex.label, probs);

    // delta = dL/dz for the current layer, walking backwards.
    std::vector<double> delta = probs;
    delta[ex.label] -= 1.0;
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t in = dims[l];
      const std::size_t outw = dims[l + 1];
      const auto& a = f.acts[l];
      double* gw = out.gradient.data() + offsets[l];
      double* gb = gw + in * outw;
      for (std::size_t r = 0; r < outw; ++r) {
        for (std::size_t c = 0; c < in; ++c) gw[r * in + c] += delta[r] * a[c];
        gb[r] += delta[r];
      }
      if (l == 0) break;
      const double* w = params.data() + offsets[l];
      std::vector<double> prev(in, 0.0);
      for (std::size_t r = 0; r < outw; ++r) {
        for (std::size_t c = 0; c < in; ++c) prev[c] += w[r * in + c] * delta[r];
      }
      // ReLU derivative: zero where the stored activation was clipped.
      for (std::size_t c = 0; c < in; ++c) {
        if (a[c] <= 0.0) prev[c] = 0.0;
      }
      delta = std::move(prev);
    }
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  out.loss *= inv;
  for (double& g : out.gradient) g *= inv;
  return out;
}

double mean_cross_entropy(std::span<const double> params, std::span<const Example> examples,
                          const ModelSpec& spec) {
  check_inputs(params, spec);
  if (examples.empty()) throw std::invalid_argument("mean_cross_entropy: empty example set");
  const auto dims = layer_dims(spec);
  std::vector<double> probs;
  double total = 0.0;
  for (const Example& ex : examples) {
    check_example(ex, spec);
    total += softmax_xent(forward(params, ex.features, dims).acts.back(), ex.label, probs);
  }
  return total / static_cast<double>(examples.size());
}

std::uint32_t predict(std::span<const double> params, std::span<const double> features,
                      const ModelSpec& spec) {
  check_inputs(params, spec);
  const auto f = forward(params, features, layer_dims(spec));
  const auto& logits = f.acts.back();
  return static_cast<std::uint32_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

std::vector<std::uint32_t> predict_all(const ParameterVector& params, std::span<const Example> examples,
                                       const ModelSpec& spec) {
  std::vector<std::uint32_t> out;
  out.reserve(examples.size());
  for (const Example& ex : examples) out.push_back(predict(params.values(), ex.features, spec));
  return out;
}

ParameterVector train_local(const ParameterVector& init, const DatasetShard& shard, const ModelSpec& spec,
                            const TrainConfig& cfg, std::uint32_t round) {
  spec.validate();
  check_inputs(init.values(), spec);
  if (shard.examples.empty()) throw std::invalid_argument("train_local: empty shard");
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw std::invalid_argument("train_local: learning_rate must be finite and non-negative");
  }
  if (cfg.local_epochs == 0 || cfg.batch_size == 0) {
    throw std::invalid_argument("train_local: local_epochs and batch_size must be >= 1");
  }

  std::vector<double> params(init.values().begin(), init.values().end());
  if (cfg.learning_rate == 0.0) return init;

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(shard.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Example> batch;
  batch.reserve(cfg.batch_size);

  for (std::size_t epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < stop; ++k) batch.push_back(shard.examples[order[k]]);
      const auto lg = loss_and_gradient(params, batch, spec);
      for (std::size_t j = 0; j < params.size(); ++j) params[j] -= cfg.learning_rate * lg.gradient[j];
    }
    if (!std::all_of(params.begin(), params.end(), [](double v) { return std::isfinite(v); })) {
      throw TrainingError(shard.client_id, round,
                          "training diverged for client " + std::to_string(shard.client_id) +
                              " in round " + std::to_string(round) + " (epoch " +
                              std::to_string(epoch + 1) + ")");
    }
  }
  return ParameterVector(std::move(params));
}

double evaluate_score(const ParameterVector& params, std::span<const Example> eval_set,
                      const ModelSpec& spec) {
  if (eval_set.empty()) throw std::invalid_argument("evaluate_score: empty evaluation set");
  std::size_t correct = 0;
  for (const Example& ex : eval_set) {
    check_example(ex, spec);
    if (predict(params.values(), ex.features, spec) == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(eval_set.size());
}

}  // namespace fedagg
