// Copyright 2026 The INCE Authors
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

#ifndef INCE__CLI_HPP_
#define INCE__CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace ince
{

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args[0] is the program name). Results go to `out`;
/// failures are reported on `err` as a single JSON object
/// {"error": <kind>, "message": <text>}.
int cli_dispatch(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace ince

#endif  // INCE__CLI_HPP_
