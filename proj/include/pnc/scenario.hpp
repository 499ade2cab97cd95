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

#ifndef PNC_SCENARIO_HPP_
#define PNC_SCENARIO_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pnc/model.hpp"

namespace pnc {

struct Scenario {
  NetworkSpec spec;
  QueueState initial;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Built-in networks.
//   generic           two buffers, three mutually exclusive links
//                     B = (-2 -1 -5; 0 1 -1), arrivals 3 w.p. 0.8 at buffer 1
//   generic-modified  as generic with link 3 = (-5, -2)
//   natural           game-master network, two-state channel, a = (0.5, 0, 0.9)
//   natural-alternating  natural with square-wave arrival rates
Scenario generic_scenario();
Scenario generic_modified_scenario();
Scenario natural_scenario();
/// Buffer 1 alternates 0.675 / 0.075 every 100 slots, buffer 3 alternates
/// 0.76 / 0 every 250 slots, both starting high unless shifted.
Scenario natural_alternating_scenario(std::int64_t phase_offset = 0);

Scenario builtin_scenario(const std::string& name);

/// `builtin:<name>` or a path to a JSON scenario file.
Scenario load_scenario(const std::string& source);

/// Parses a JSON document. Errors name the offending key and its line.
Scenario parse_scenario(const std::string& text);
std::string dump_scenario(const Scenario& scenario);

}  // namespace pnc

#endif  // PNC_SCENARIO_HPP_
