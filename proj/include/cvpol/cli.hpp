// Copyright 2026 The cvpol Authors
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

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvpol/criteria.hpp"

namespace cvpol {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitPhysics = 2, kExitIo = 3 };

/// Entry point of the `cvpol` tool; args[0] is the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Conditional-knowledge ellipses of the four-squeezer scheme with pure
/// squeezing V (V- = 1/V), for conditioning on S1, S2 and S3.
std::array<EllipsePoint, 3> fig4_points(double squeezing);

}  // namespace cvpol
