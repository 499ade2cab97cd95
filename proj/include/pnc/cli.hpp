// Copyright 2026 The PNC Authors
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

#ifndef PNC_CLI_HPP_
#define PNC_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "pnc/sim.hpp"

namespace pnc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitRuntimeFailure = 3;

/// Runs `pnc <args...>`; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "min:max:step" -> ascending values. Throws std::invalid_argument on a
/// malformed or empty range.
std::vector<double> parse_range(const std::string& spec);

/// "mw,qpnc:3,lpnc" -> configs; a PNC entry without a horizon gets `default_horizon`.
std::vector<PolicyConfig> parse_policy_list(const std::string& list, int default_horizon,
                                            int tau_hard, bool all_hard);

std::string trace_csv(const SimulationTrace& trace);

}  // namespace pnc::cli

#endif  // PNC_CLI_HPP_
