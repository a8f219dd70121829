//
// Copyright 2026 The prunepriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRUNEPRIV_CLI_COMMANDS_H_
#define PRUNEPRIV_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace prunepriv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `prunepriv` tool. args[0] is the program name.
// Subcommands: train, prune, closeness-grid, minimal-m, invert,
// leakage-compare, dp-cert, verify, dataset. Global flags: --config,
// --seed, --out, --jobs, --format {csv,json}, --set key=value.
// Returns 0 on success, 2 on usage or config errors, 1 on runtime errors.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace prunepriv

#endif  // PRUNEPRIV_CLI_COMMANDS_H_
