/*
 * Copyright 2026 The psod-eval Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PSOD_CLI_HPP
#define PSOD_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace psod::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2 };

/// Runs the `psod` command line. `args` excludes the program name.
/// Subcommands: eval, metrics, losses, align, gen, select.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace psod::cli

#endif  // PSOD_CLI_HPP
