// Copyright 2026 The cpmgoc Authors.
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

#ifndef CPMGOC_TOOLS_CLI_HPP
#define CPMGOC_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "cpmgoc/propagation.hpp"

namespace cpmgoc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr const char *kOutputDirEnv = "CPMGOC_OUTPUT_DIR";

/// Settings shared by pulse specifications.
struct PulseContext {
    double a_max = angular(5000.0);
    double guard = 6e-6;
};

/// "ideal", "hard" (180 deg about y), "hard90" (90 deg about x), "sym:SPEC"
/// (symmetrized SPEC shifted by +90 deg), or a waveform file (.json/.csv).
RefocusingPulse resolve_pulse(const std::string &spec, const PulseContext &ctx);

/// args excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace cpmgoc::cli

#endif  // CPMGOC_TOOLS_CLI_HPP
