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

#include "fedagg/client_report.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "fedagg/error.hpp"

namespace fedagg {

std::vector<ClientReport> canonical_order(std::span<const ClientReport> reports) {
  if (reports.empty()) throw std::invalid_argument("aggregation needs at least one client report");
  std::vector<ClientReport> sorted(reports.begin(), reports.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ClientReport& a, const ClientReport& b) { return a.client_id < b.client_id; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].client_id == sorted[i - 1].client_id) {
      throw std::invalid_argument("duplicate client id " + std::to_string(sorted[i].client_id));
    }
  }
  const std::size_t length = sorted.front().parameters.size();
  for (const auto& r : sorted) {
    if (r.parameters.size() != length) {
      throw StructuralError("client " + std::to_string(r.client_id) + " sent " +
                            std::to_string(r.parameters.size()) + " parameters, expected " +
                            std::to_string(length));
    }
  }
  return sorted;
}

std::vector<ParameterVector> parameters_of(std::span<const ClientReport> reports) {
  std::vector<ParameterVector> out;
  out.reserve(reports.size());
  for (const auto& r : reports) out.push_back(r.parameters);
  return out;
}

}  // namespace fedagg
