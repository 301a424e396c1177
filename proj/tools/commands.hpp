// Copyright 2026 The magickit Authors
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

#ifndef MAGICKIT_TOOLS_COMMANDS_HPP
#define MAGICKIT_TOOLS_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace magickit::cli {

enum ExitCode { kOk = 0, kDomainFailure = 1, kUsage = 2, kNumerical = 3 };

/// Runs one invocation; args excludes the program name. Results go to out, diagnostics to err.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace magickit::cli

#endif
