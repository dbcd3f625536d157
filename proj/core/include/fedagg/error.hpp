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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fedagg {

// Vectors or lists whose shapes do not line up.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Local training produced a non-finite parameter.
class TrainingError : public std::runtime_error {
 public:
  TrainingError(std::uint32_t client_id, std::uint32_t round, const std::string& what)
      : std::runtime_error(what), client_id_(client_id), round_(round) {}

  std::uint32_t client_id() const noexcept { return client_id_; }
  std::uint32_t round() const noexcept { return round_; }

 private:
  std::uint32_t client_id_;
  std::uint32_t round_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failures; the message always carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fedagg
