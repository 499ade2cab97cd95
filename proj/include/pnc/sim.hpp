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

#ifndef PNC_SIM_HPP_
#define PNC_SIM_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "pnc/model.hpp"
#include "pnc/policy.hpp"

namespace pnc {

using IntRowMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Row t holds the state at the start of slot t and what happened during it.
struct SimulationTrace {
  std::vector<int> sigma;  // T
  IntRowMatrix queues;     // T x n
  IntRowMatrix controls;   // T x m
  IntRowMatrix successes;  // T x m
  IntRowMatrix arrivals;   // T x n
  IntVector final_queue;
  int final_sigma = 0;
  std::int64_t total_departures = 0;

  std::int64_t slots() const { return static_cast<std::int64_t>(sigma.size()); }
  Vector average_queue() const;
  /// Sum of all buffers at the start of each slot.
  Vector total_queue() const;
};

struct StabilityVerdict {
  double slope = 0.0;
  bool stable = true;
};

inline constexpr double kDefaultWindowFraction = 0.5;
inline constexpr double kDefaultSlopeThreshold = 0.05;
inline constexpr double kStableSeedFraction = 0.8;

/// Closed loop from `initial`: decide, realize, step, T times.
SimulationTrace run(const NetworkSpec& spec, const PolicyConfig& cfg, const QueueState& initial,
                    std::int64_t T, std::uint64_t seed);
/// Same, starting from empty queues in Markov state 0.
SimulationTrace run(const NetworkSpec& spec, const PolicyConfig& cfg, std::int64_t T,
                    std::uint64_t seed);

/// Least-squares slope of `series` over its final `window_fraction`.
double trailing_slope(const Vector& series, double window_fraction);

/// Fits the total queue over the final window. Requires at least 200 slots.
StabilityVerdict classify_stability(const SimulationTrace& trace,
                                    double window_fraction = kDefaultWindowFraction,
                                    double slope_threshold = kDefaultSlopeThreshold);

struct RegionPoint {
  double a1 = 0.0;
  double a2 = 0.0;
  double stable_fraction = 0.0;
  bool stable = false;
};

/// For each (a1, a2) sets the mean rates of buffers 1 and 2 (probability =
/// rate / weight, schedules dropped) and runs every seed. A point is stable
/// when at least 80% of seeds are. Throws std::invalid_argument if a rate
/// exceeds its buffer's weight.
std::vector<RegionPoint> sweep_region(const NetworkSpec& spec_template, const PolicyConfig& cfg,
                                      const QueueState& initial,
                                      const std::vector<std::pair<double, double>>& grid,
                                      std::int64_t T, const std::vector<std::uint64_t>& seeds);

/// Raises the packet weight of buffers 1 and 2 to ceil(max rate) wherever the
/// grid asks for more than one batch per slot on average.
NetworkSpec fit_arrival_weights(const NetworkSpec& spec,
                                const std::vector<std::pair<double, double>>& grid);

/// Returns a copy of `spec` with buffer i's mean rate set to `rate`.
NetworkSpec with_arrival_rate(const NetworkSpec& spec, int buffer, double rate);

struct PolicySummary {
  PolicyConfig cfg;
  Vector avg_queue;  // per buffer, averaged over seeds
};

/// Paired comparison: every policy sees the same seeds, hence the same
/// arrival and channel draws.
std::vector<PolicySummary> compare_policies(const NetworkSpec& spec,
                                            const std::vector<PolicyConfig>& cfgs,
                                            const QueueState& initial, std::int64_t T,
                                            const std::vector<std::uint64_t>& seeds);

/// Seeds 1..count.
std::vector<std::uint64_t> seed_range(int count, std::uint64_t first = 1);

}  // namespace pnc

#endif  // PNC_SIM_HPP_
