// Copyright 2026 The ppmenergy Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ppmenergy::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kNumerical = 3,
  kIo = 4,
};

/// Environment variable consulted for the default --threads value.
inline constexpr const char* kThreadsEnv = "PPMENERGY_THREADS";

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Subcommands: generate | spectrum | sweep | theory.
/// A JSON object given with --config supplies any flag of the chosen
/// subcommand; flags on the command line take precedence.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppmenergy::cli
