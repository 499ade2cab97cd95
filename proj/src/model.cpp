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

#include "pnc/model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pnc {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::int64_t schedule_period(const std::vector<SchedulePhase>& schedule) {
  std::int64_t total = 0;
  for (const auto& phase : schedule) total += phase.duration;
  return total;
}

void check_dims(const IntVector& q, const IntVector& u, const NetworkSpec& spec) {
  require(q.size() == spec.buffers(), "queue vector has " + std::to_string(q.size()) +
                                          " entries, expected " + std::to_string(spec.buffers()));
  require(u.size() == spec.links(), "control vector has " + std::to_string(u.size()) +
                                        " entries, expected " + std::to_string(spec.links()));
}

}  // namespace

double ArrivalProcess::probability_at(std::int64_t t) const {
  if (schedule.empty()) return probability;
  const std::int64_t period = schedule_period(schedule);
  std::int64_t pos = (t + phase_offset) % period;
  if (pos < 0) pos += period;
  for (const auto& phase : schedule) {
    if (pos < phase.duration) return phase.probability;
    pos -= phase.duration;
  }
  return schedule.back().probability;
}

double ArrivalProcess::mean_rate() const {
  if (schedule.empty()) return probability * weight;
  double acc = 0.0;
  for (const auto& phase : schedule) acc += phase.probability * static_cast<double>(phase.duration);
  return acc / static_cast<double>(schedule_period(schedule)) * weight;
}

void NetworkSpec::validate() const {
  const int n = buffers();
  const int m = links();
  const int p = states();
  require(n >= 1 && m >= 1, "link_matrix must be non-empty");
  require(transition.cols() == p && p >= 1, "transition must be a non-empty square matrix");
  require(constituency.cols() == m, "constituency must have one column per link (" +
                                        std::to_string(m) + ")");
  for (Eigen::Index r = 0; r < constituency.rows(); ++r)
    for (Eigen::Index j = 0; j < m; ++j)
      require(constituency(r, j) == 0 || constituency(r, j) == 1,
              "constituency entries must be 0 or 1 (row " + std::to_string(r + 1) + ")");
  for (int j = 0; j < p; ++j) {
    require((transition.col(j).array() >= 0.0).all(),
            "transition column " + std::to_string(j + 1) + " has a negative entry");
    require(std::abs(transition.col(j).sum() - 1.0) <= 1e-12,
            "transition column " + std::to_string(j + 1) + " does not sum to 1");
  }
  require(static_cast<int>(success_weights.size()) == p,
          "success_weights must have one entry per Markov state (" + std::to_string(p) + ")");
  for (int i = 0; i < p; ++i) {
    require(success_weights[i].size() == m,
            "success_weights[" + std::to_string(i + 1) + "] must have " + std::to_string(m) +
                " entries");
    require((success_weights[i].array() >= 0.0).all() && (success_weights[i].array() <= 1.0).all(),
            "success_weights[" + std::to_string(i + 1) + "] entries must lie in [0,1]");
  }
  require(static_cast<int>(arrivals.size()) == n,
          "arrivals must have one entry per buffer (" + std::to_string(n) + ")");
  for (int i = 0; i < n; ++i) {
    const auto& a = arrivals[i];
    const std::string tag = "arrivals[" + std::to_string(i + 1) + "]";
    require(a.weight >= 0, tag + ".weight must be nonnegative");
    require(a.probability >= 0.0 && a.probability <= 1.0, tag + ".probability must lie in [0,1]");
    for (const auto& phase : a.schedule) {
      require(phase.duration >= 1, tag + ".schedule durations must be >= 1");
      require(phase.probability >= 0.0 && phase.probability <= 1.0,
              tag + ".schedule probabilities must lie in [0,1]");
    }
  }
}

Matrix NetworkSpec::weighted_links(int state) const {
  return link_matrix.cast<double>() * success_weights.at(state).asDiagonal();
}

Vector NetworkSpec::arrival_rates_at(std::int64_t t) const {
  Vector rates(buffers());
  for (int i = 0; i < buffers(); ++i) rates(i) = arrivals[i].rate_at(t);
  return rates;
}

bool is_admissible(const IntVector& q, const IntVector& u, const NetworkSpec& spec) {
  check_dims(q, u, spec);
  for (Eigen::Index j = 0; j < u.size(); ++j)
    require(u(j) == 0 || u(j) == 1, "control entries must be 0 or 1");
  if (spec.constituency.rows() > 0 && ((spec.constituency * u).array() > 1).any()) return false;
  const IntVector worst = q + clamp_minus(spec.link_matrix) * u;
  return (worst.array() >= 0).all();
}

SlotRealization realize_slot(const QueueState& state, const NetworkSpec& spec,
                             const CounterRng& rng) {
  const int n = spec.buffers();
  const int m = spec.links();
  if (state.sigma < 0 || state.sigma >= spec.states())
    throw std::invalid_argument("Markov state out of range");
  const auto slot = static_cast<std::uint64_t>(state.t);
  std::uint32_t draw = 0;

  SlotRealization real;
  real.arrivals.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& a = spec.arrivals[i];
    real.arrivals(i) = rng.bernoulli(a.probability_at(state.t), slot, draw++) ? a.weight : 0;
  }
  real.link_success.resize(m);
  const Vector& weights = spec.success_weights[state.sigma];
  for (int j = 0; j < m; ++j) real.link_success(j) = rng.bernoulli(weights(j), slot, draw++) ? 1 : 0;

  const double x = rng.uniform(slot, draw++);
  const int p = spec.states();
  real.next_sigma = p - 1;
  double cumulative = 0.0;
  for (int k = 0; k < p; ++k) {
    cumulative += spec.transition(k, state.sigma);
    if (x < cumulative) {
      real.next_sigma = k;
      break;
    }
  }
  // Guard against rounding that would land on a zero-probability tail state.
  while (real.next_sigma > 0 && spec.transition(real.next_sigma, state.sigma) == 0.0) --real.next_sigma;
  return real;
}

IntVector realized_transfer(const NetworkSpec& spec, const IntVector& u,
                            const IntVector& link_success) {
  return spec.link_matrix * u.cwiseProduct(link_success);
}

QueueState step(const QueueState& state, const IntVector& u, const SlotRealization& real,
                const NetworkSpec& spec) {
  if (!is_admissible(state.q, u, spec))
    throw std::invalid_argument("control is not admissible in the current queue state");
  QueueState next;
  next.q = state.q + realized_transfer(spec, u, real.link_success) + real.arrivals;
  next.sigma = real.next_sigma;
  next.t = state.t + 1;
  return next;
}

}  // namespace pnc
