// Copyright 2026 The Translationese Lab Authors.
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

// Command-line entry point for translationese-lab.

#ifndef TLAB_CLI_H_
#define TLAB_CLI_H_

#include <string>
#include <vector>

namespace tlab {

inline constexpr const char* kCacheEnvVar = "TRANSLATIONESE_LAB_CACHE";

// Runs one subcommand. Returns 0 on success, 1 on a domain error (printed
// as "Kind: detail" on stderr) and 2 on a usage error.
int Dispatch(int argc, const char* const* argv);
int Dispatch(const std::vector<std::string>& args);  // args[0] is the program

}  // namespace tlab

#endif  // TLAB_CLI_H_
