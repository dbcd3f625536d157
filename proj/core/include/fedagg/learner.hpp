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
#include <span>
#include <vector>

#include "fedagg/client_report.hpp"
#include "fedagg/data.hpp"
#include "fedagg/params.hpp"

namespace fedagg {

/// Fully connected softmax classifier. No hidden layers is multinomial
/// logistic regression; hidden layers use ReLU.
struct ModelSpec {
  std::size_t input_dim = 2;
  std::vector<std::size_t> hidden_dims;
  std::size_t num_classes = 2;

  std::size_t parameter_count() const;
  // Throws std::invalid_argument on a zero width.
  void validate() const;
};

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t local_epochs = 1;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
};

/// Uniform in [-0.1, 0.1], deterministic in seed.
ParameterVector init_parameters(const ModelSpec& spec, std::uint64_t seed);

struct LossAndGradient {
  double loss = 0.0;  // mean cross-entropy over the batch
  std::vector<double> gradient;
};

LossAndGradient loss_and_gradient(std::span<const double> params, std::span<const Example> batch,
                                  const ModelSpec& spec);

double mean_cross_entropy(std::span<const double> params, std::span<const Example> examples,
                          const ModelSpec& spec);

// Argmax of the logits; ties go to the lowest class index.
std::uint32_t predict(std::span<const double> params, std::span<const double> features,
                      const ModelSpec& spec);
std::vector<std::uint32_t> predict_all(const ParameterVector& params, std::span<const Example> examples,
                                       const ModelSpec& spec);

/// `local_epochs` passes of mini-batch gradient descent on the shard, batch
/// order reshuffled each epoch from cfg.seed. Throws TrainingError (carrying
/// the shard's client id and `round`) if any parameter becomes non-finite.
ParameterVector train_local(const ParameterVector& init, const DatasetShard& shard, const ModelSpec& spec,
                            const TrainConfig& cfg, std::uint32_t round = 0);

/// Accuracy of argmax predictions on eval_set, in [0, 1].
double evaluate_score(const ParameterVector& params, std::span<const Example> eval_set,
                      const ModelSpec& spec);

}  // namespace fedagg
