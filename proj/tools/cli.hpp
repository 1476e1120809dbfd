// Copyright 2026 The mlidar Authors.
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

#include <ostream>
#include <string>
#include <vector>

namespace mlidar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// Runs one command line (args[0] is the program name). Never throws; the
/// return value is the process exit code.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Parses "a:b:logN", "a:b:linN" or a comma list. Throws InvalidArgument.
std::vector<double> ParseNumberList(const std::string& text);

}  // namespace mlidar::cli
