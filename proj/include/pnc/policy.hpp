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

#ifndef PNC_POLICY_HPP_
#define PNC_POLICY_HPP_

#include <string>
#include <vector>

#include "pnc/expect.hpp"
#include "pnc/model.hpp"
#include "pnc/solver.hpp"

namespace pnc {

enum class PolicyKind { kMaxWeight, kLinearPnc, kQuadraticPnc };

std::string to_string(PolicyKind kind);
/// Accepts "mw", "maxweight", "lpnc", "qpnc".
PolicyKind parse_policy_kind(const std::string& name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kQuadraticPnc;
  int H = 1;
  int tau_hard = 1;
  Matrix Q;  // empty means I_n
  Matrix R;  // empty means 0

  static PolicyConfig maxweight();
  static PolicyConfig lpnc(int horizon, int tau_hard);
  static PolicyConfig qpnc(int horizon, int tau_hard);

  /// Short label such as "mw", "lpnc:2", "qpnc:3".
  std::string label() const;
};

/// Receding-horizon controller bound to one network. Everything that depends
/// only on the Markov state (expected link matrices, J_q, D) is precomputed;
/// a decision only fills J_l and d and runs the exact solver.
class Controller {
 public:
  Controller(const NetworkSpec& spec, PolicyConfig cfg);

  const PolicyConfig& config() const { return cfg_; }

  /// First m-block of the optimal trajectory for the current state.
  IntVector decide(const QueueState& state);
  /// Same, with an explicit mean arrival vector.
  IntVector decide(const QueueState& state, const Vector& arrival_rates);

  /// The full optimal trajectory (length m*H).
  BqpSolution plan(const QueueState& state, const Vector& arrival_rates);

  /// The program the controller solves in this state, for inspection.
  const BqpInstance& program(const QueueState& state, const Vector& arrival_rates);

 private:
  struct StateCache {
    std::vector<Matrix> weighted_expected;  // Q * E[B_j | sigma], j < H
    BqpInstance instance;                   // c and the d-part of b are refreshed per call
  };

  void refresh(const QueueState& state, const Vector& arrival_rates);

  const NetworkSpec* spec_;
  PolicyConfig cfg_;
  int constituency_rows_ = 0;
  std::vector<StateCache> cache_;
};

/// Stateless convenience wrapper around Controller.
IntVector decide(const QueueState& state, const NetworkSpec& spec, const PolicyConfig& cfg);

/// True iff MaxWeight and L-PNC with H = 1 choose the same control in every state.
bool mw_equivalence_check(const std::vector<QueueState>& states, const NetworkSpec& spec);

}  // namespace pnc

#endif  // PNC_POLICY_HPP_
