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

#include "pnc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pnc {

Vector SimulationTrace::average_queue() const {
  if (queues.rows() == 0) return Vector::Zero(queues.cols());
  return queues.cast<double>().colwise().mean().transpose();
}

Vector SimulationTrace::total_queue() const {
  return queues.cast<double>().rowwise().sum();
}

SimulationTrace run(const NetworkSpec& spec, const PolicyConfig& cfg, const QueueState& initial,
                    std::int64_t T, std::uint64_t seed) {
  if (T < 1) throw std::invalid_argument("simulation needs at least one slot");
  const int n = spec.buffers();
  const int m = spec.links();
  if (initial.q.size() != n) throw std::invalid_argument("initial queue has wrong length");

  Controller controller(spec, cfg);
  const CounterRng rng(seed);
  SimulationTrace trace;
  trace.sigma.resize(T);
  trace.queues.resize(T, n);
  trace.controls.resize(T, m);
  trace.successes.resize(T, m);
  trace.arrivals.resize(T, n);

  QueueState state = initial;
  for (std::int64_t k = 0; k < T; ++k) {
    const IntVector u = controller.decide(state);
    const SlotRealization real = realize_slot(state, spec, rng);
    QueueState next = step(state, u, real, spec);

    trace.sigma[k] = state.sigma;
    trace.queues.row(k) = state.q.transpose();
    trace.controls.row(k) = u.transpose();
    trace.successes.row(k) = real.link_success.transpose();
    trace.arrivals.row(k) = real.arrivals.transpose();
    trace.total_departures -= realized_transfer(spec, u, real.link_success).sum();
    state = std::move(next);
  }
  trace.final_queue = state.q;
  trace.final_sigma = state.sigma;
  return trace;
}

SimulationTrace run(const NetworkSpec& spec, const PolicyConfig& cfg, std::int64_t T,
                    std::uint64_t seed) {
  QueueState initial;
  initial.q = IntVector::Zero(spec.buffers());
  return run(spec, cfg, initial, T, seed);
}

double trailing_slope(const Vector& series, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument("window fraction must lie in (0, 1]");
  const Eigen::Index len = series.size();
  const Eigen::Index w = std::max<Eigen::Index>(2, static_cast<Eigen::Index>(std::llround(window_fraction * len)));
  if (w > len) throw std::invalid_argument("series too short for a slope fit");
  const Eigen::Index start = len - w;
  double mean_x = 0.0, mean_y = 0.0;
  for (Eigen::Index i = start; i < len; ++i) {
    mean_x += static_cast<double>(i);
    mean_y += series(i);
  }
  mean_x /= static_cast<double>(w);
  mean_y /= static_cast<double>(w);
  double sxy = 0.0, sxx = 0.0;
  for (Eigen::Index i = start; i < len; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (series(i) - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

StabilityVerdict classify_stability(const SimulationTrace& trace, double window_fraction,
                                    double slope_threshold) {
  if (trace.slots() < 200)
    throw std::invalid_argument("stability classification needs at least 200 slots, got " +
                                std::to_string(trace.slots()));
  StabilityVerdict verdict;
  verdict.slope = trailing_slope(trace.total_queue(), window_fraction);
  verdict.stable = verdict.slope <= slope_threshold;
  return verdict;
}

NetworkSpec with_arrival_rate(const NetworkSpec& spec, int buffer, double rate) {
  if (buffer < 0 || buffer >= spec.buffers()) throw std::invalid_argument("buffer index out of range");
  NetworkSpec out = spec;
  ArrivalProcess& a = out.arrivals[buffer];
  a.schedule.clear();
  if (rate < 0.0) throw std::invalid_argument("arrival rate must be nonnegative");
  if (rate == 0.0) {
    a.probability = 0.0;
    return out;
  }
  if (a.weight <= 0 || rate > a.weight + 1e-12)
    throw std::invalid_argument("arrival rate " + std::to_string(rate) + " at buffer " +
                                std::to_string(buffer + 1) + " is not realizable with weight " +
                                std::to_string(a.weight));
  a.probability = std::min(1.0, rate / a.weight);
  return out;
}

NetworkSpec fit_arrival_weights(const NetworkSpec& spec,
                                const std::vector<std::pair<double, double>>& grid) {
  NetworkSpec out = spec;
  double peak1 = 0.0, peak2 = 0.0;
  for (const auto& [a1, a2] : grid) {
    peak1 = std::max(peak1, a1);
    peak2 = std::max(peak2, a2);
  }
  auto fit = [](ArrivalProcess& a, double peak) {
    if (peak > a.weight) a.weight = static_cast<int>(std::ceil(peak - 1e-12));
  };
  fit(out.arrivals.at(0), peak1);
  fit(out.arrivals.at(1), peak2);
  return out;
}

std::vector<RegionPoint> sweep_region(const NetworkSpec& spec_template, const PolicyConfig& cfg,
                                      const QueueState& initial,
                                      const std::vector<std::pair<double, double>>& grid,
                                      std::int64_t T, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
  if (spec_template.buffers() < 2) throw std::invalid_argument("sweep needs at least two buffers");
  // Validate every point before spending time on any of them.
  std::vector<NetworkSpec> specs;
  specs.reserve(grid.size());
  for (const auto& [a1, a2] : grid)
    specs.push_back(with_arrival_rate(with_arrival_rate(spec_template, 0, a1), 1, a2));

  std::vector<RegionPoint> region;
  region.reserve(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    int stable = 0;
    for (const auto seed : seeds)
      if (classify_stability(run(specs[g], cfg, initial, T, seed)).stable) ++stable;
    RegionPoint pt;
    pt.a1 = grid[g].first;
    pt.a2 = grid[g].second;
    pt.stable_fraction = static_cast<double>(stable) / static_cast<double>(seeds.size());
    pt.stable = pt.stable_fraction >= kStableSeedFraction;
    region.push_back(pt);
  }
  return region;
}

std::vector<PolicySummary> compare_policies(const NetworkSpec& spec,
                                            const std::vector<PolicyConfig>& cfgs,
                                            const QueueState& initial, std::int64_t T,
                                            const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("comparison needs at least one seed");
  std::vector<PolicySummary> rows;
  rows.reserve(cfgs.size());
  for (const auto& cfg : cfgs) {
    PolicySummary row;
    row.cfg = cfg;
    row.avg_queue = Vector::Zero(spec.buffers());
    for (const auto seed : seeds) row.avg_queue += run(spec, cfg, initial, T, seed).average_queue();
    row.avg_queue /= static_cast<double>(seeds.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::uint64_t> seed_range(int count, std::uint64_t first) {
  std::vector<std::uint64_t> seeds(std::max(count, 0));
  for (int i = 0; i < count; ++i) seeds[i] = first + static_cast<std::uint64_t>(i);
  return seeds;
}

}  // namespace pnc
