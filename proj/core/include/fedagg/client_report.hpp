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
#include <span>
#include <vector>

#include "fedagg/data.hpp"
#include "fedagg/params.hpp"

namespace fedagg {

/// What a client sends back after a round: trained parameters, its score on
/// the evaluation set, and its dataset size.
struct ClientReport {
  ClientId client_id = 0;
  ParameterVector parameters;
  double score = 0.0;
  std::size_t size = 1;
};

/// Copy of `reports` sorted by client id. Every aggregator sums in this
/// order. Throws std::invalid_argument on duplicate ids or an empty list and
/// StructuralError if parameter lengths differ.
std::vector<ClientReport> canonical_order(std::span<const ClientReport> reports);

std::vector<ParameterVector> parameters_of(std::span<const ClientReport> reports);

}  // namespace fedagg
