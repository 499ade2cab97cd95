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

#ifndef PNC_MODEL_HPP_
#define PNC_MODEL_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "pnc/random.hpp"

namespace pnc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using IntVector = Eigen::VectorXi;

/// One phase of a piecewise-constant arrival schedule.
struct SchedulePhase {
  std::int64_t duration = 1;  // slots, >= 1
  double probability = 0.0;
};

/// Bernoulli arrivals: `weight` packets with probability `probability` each
/// slot. A non-empty schedule overrides `probability` and is cycled forever,
/// shifted by `phase_offset` slots.
struct ArrivalProcess {
  double probability = 0.0;
  int weight = 1;
  std::vector<SchedulePhase> schedule;
  std::int64_t phase_offset = 0;

  double probability_at(std::int64_t t) const;
  double rate_at(std::int64_t t) const { return probability_at(t) * weight; }
  /// Long-run mean packets per slot.
  double mean_rate() const;
};

/// Static network description. Markov states are 0-based internally.
struct NetworkSpec {
  IntMatrix link_matrix;             // n x m, columns are links
  IntMatrix constituency;            // r x m, entries in {0,1}
  Matrix transition;                 // p x p, column-stochastic
  std::vector<Vector> success_weights;  // p entries, each the diagonal of M_i (length m)
  std::vector<ArrivalProcess> arrivals; // n entries

  int buffers() const { return static_cast<int>(link_matrix.rows()); }
  int links() const { return static_cast<int>(link_matrix.cols()); }
  int states() const { return static_cast<int>(transition.rows()); }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  /// B M_i as a real matrix.
  Matrix weighted_links(int state) const;
  /// Mean arrival vector seen by the controller at slot t (current schedule phase).
  Vector arrival_rates_at(std::int64_t t) const;
};

struct QueueState {
  IntVector q;
  int sigma = 0;
  std::int64_t t = 0;
};

struct SlotRealization {
  IntVector link_success;  // m entries in {0,1}
  IntVector arrivals;      // n entries, each 0 or w_i
  int next_sigma = 0;
};

/// Element-wise min(x, 0); keeps only the packets a link removes.
template <typename Derived>
typename Derived::PlainObject clamp_minus(const Eigen::MatrixBase<Derived>& a) {
  return a.cwiseMin(typename Derived::Scalar(0));
}

/// C u <= 1 and q + clamp_minus(B) u >= 0, i.e. feasible for every link
/// success pattern.
bool is_admissible(const IntVector& q, const IntVector& u, const NetworkSpec& spec);

/// Draws arrivals (ascending buffer), link successes (ascending link), then
/// the next Markov state. Draw index k of slot t is rng.uniform(t, k).
SlotRealization realize_slot(const QueueState& state, const NetworkSpec& spec,
                             const CounterRng& rng);

/// Realized link matrix: B with unsuccessful columns zeroed, times u.
IntVector realized_transfer(const NetworkSpec& spec, const IntVector& u,
                            const IntVector& link_success);

/// Advances one slot. Throws std::invalid_argument if u is not admissible.
QueueState step(const QueueState& state, const IntVector& u, const SlotRealization& real,
                const NetworkSpec& spec);

}  // namespace pnc

#endif  // PNC_MODEL_HPP_
