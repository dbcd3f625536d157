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

#include <iosfwd>
#include <span>
#include <string>

namespace fedagg {

/// Entry point of the `fedagg` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on a runtime failure, 2 on a usage error.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fedagg
