// Copyright 2026 The Outbreak Wiki Authors.
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

#ifndef OUTBREAK_TOOLS_CLI_H_
#define OUTBREAK_TOOLS_CLI_H_

#include <iosfwd>
#include <span>
#include <string>

namespace outbreak::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line (without the program name). Data goes to files or
// `out`, diagnostics and logs to `err`.
int run(std::span<const std::string> args, std::ostream &out, std::ostream &err);

}  // namespace outbreak::cli

#endif  // OUTBREAK_TOOLS_CLI_H_
