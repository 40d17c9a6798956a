// Copyright 2026 The gecaug Authors
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

#ifndef GECAUG_CLI_H_
#define GECAUG_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace gecaug::cli {

inline constexpr char kVersion[] = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;

// Runs one command line (without the program name). Data goes to `out`,
// log events and the single-line error report to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int Run(const std::vector<std::string>& args);

// `<output>.manifest.json`.
std::filesystem::path ManifestPath(const std::filesystem::path& output);

// Field-by-field check of a manifest written by Run: required keys present
// and every listed output hashes to the recorded digest.
bool ManifestValid(const std::filesystem::path& manifest);

}  // namespace gecaug::cli

#endif  // GECAUG_CLI_H_
