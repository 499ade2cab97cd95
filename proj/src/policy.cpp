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

#include "pnc/policy.hpp"

#include <stdexcept>

namespace pnc {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kMaxWeight: return "mw";
    case PolicyKind::kLinearPnc: return "lpnc";
    case PolicyKind::kQuadraticPnc: return "qpnc";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "mw" || name == "maxweight") return PolicyKind::kMaxWeight;
  if (name == "lpnc") return PolicyKind::kLinearPnc;
  if (name == "qpnc") return PolicyKind::kQuadraticPnc;
  throw std::invalid_argument("unknown policy '" + name + "' (expected mw, lpnc or qpnc)");
}

PolicyConfig PolicyConfig::maxweight() {
  PolicyConfig cfg;
  cfg.kind = PolicyKind::kMaxWeight;
  return cfg;
}

PolicyConfig PolicyConfig::lpnc(int horizon, int tau_hard) {
  PolicyConfig cfg;
  cfg.kind = PolicyKind::kLinearPnc;
  cfg.H = horizon;
  cfg.tau_hard = tau_hard;
  return cfg;
}

PolicyConfig PolicyConfig::qpnc(int horizon, int tau_hard) {
  PolicyConfig cfg = lpnc(horizon, tau_hard);
  cfg.kind = PolicyKind::kQuadraticPnc;
  return cfg;
}

std::string PolicyConfig::label() const {
  if (kind == PolicyKind::kMaxWeight) return "mw";
  return to_string(kind) + ":" + std::to_string(H);
}

Controller::Controller(const NetworkSpec& spec, PolicyConfig cfg) : spec_(&spec), cfg_(std::move(cfg)) {
  const int n = spec.buffers();
  const int m = spec.links();
  if (cfg_.kind == PolicyKind::kMaxWeight) {
    // MaxWeight is myopic L-PNC with Q = I, R = 0.
    cfg_.H = 1;
    cfg_.tau_hard = 1;
    cfg_.Q = Matrix::Identity(n, n);
    cfg_.R = Matrix::Zero(m, m);
  }
  if (cfg_.H < 1) throw std::invalid_argument("horizon must be >= 1");
  if (cfg_.tau_hard < 1 || cfg_.tau_hard > cfg_.H)
    throw std::invalid_argument("tau_hard must lie in [1, H]");
  if (cfg_.Q.size() == 0) cfg_.Q = Matrix::Identity(n, n);
  if (cfg_.R.size() == 0) cfg_.R = Matrix::Zero(m, m);
  require_symmetric(cfg_.Q, "Q");
  require_symmetric(cfg_.R, "R");
  if (cfg_.Q.rows() != n || cfg_.R.rows() != m)
    throw std::invalid_argument("Q must be n x n and R must be m x m");

  const int H = cfg_.H;
  const Eigen::Index N = static_cast<Eigen::Index>(m) * H;
  if (N > kMaxBqpVariables)
    throw std::invalid_argument("m * H exceeds the solver limit of " +
                                std::to_string(kMaxBqpVariables) + " variables");
  constituency_rows_ = static_cast<int>(spec.constituency.rows());
  const Eigen::Index cr = static_cast<Eigen::Index>(constituency_rows_) * H;

  const IntVector zero_q = IntVector::Zero(n);
  const Vector zero_rates = Vector::Zero(n);
  cache_.resize(spec.states());
  if (cfg_.kind == PolicyKind::kMaxWeight) {
    // Backpressure weights (q + a)^T B M_sigma under C u <= 1 and the
    // worst-case nonnegativity check, built directly from the link matrix.
    const Eigen::Index r = constituency_rows_;
    for (int sigma = 0; sigma < spec.states(); ++sigma) {
      StateCache& c = cache_[sigma];
      c.weighted_expected.push_back(spec.weighted_links(sigma));
      c.instance.c = Vector::Zero(m);
      c.instance.A.resize(r + n, m);
      c.instance.A.topRows(r) = spec.constituency.cast<double>();
      c.instance.A.bottomRows(n) = -clamp_minus(spec.link_matrix).cast<double>();
      c.instance.b = Vector::Ones(r + n);
    }
    return;
  }
  for (int sigma = 0; sigma < spec.states(); ++sigma) {
    StateCache& c = cache_[sigma];
    for (int j = 0; j < H; ++j) c.weighted_expected.push_back(cfg_.Q * expected_B(spec, sigma, j));

    BqpInstance& inst = c.instance;
    inst.c = Vector::Zero(N);
    if (cfg_.kind == PolicyKind::kQuadraticPnc)
      inst.Hq = assemble_costs(zero_q, sigma, spec, zero_rates, H, cfg_.Q, cfg_.R).quadratic;

    // D depends only on sigma; d is rebuilt per decision.
    const ConstraintSystem cs = assemble_constraints(zero_q, sigma, spec, zero_rates, H, cfg_.tau_hard);
    inst.A = Matrix::Zero(cr + cs.D.rows(), N);
    inst.b = Vector::Ones(cr + cs.D.rows());
    for (int t = 0; t < H; ++t)
      inst.A.block(static_cast<Eigen::Index>(t) * constituency_rows_, static_cast<Eigen::Index>(t) * m,
                   constituency_rows_, m) = spec.constituency.cast<double>();
    inst.A.bottomRows(cs.D.rows()) = cs.D;
  }
}

void Controller::refresh(const QueueState& state, const Vector& arrival_rates) {
  const int n = spec_->buffers();
  const int m = spec_->links();
  const int H = cfg_.H;
  if (state.q.size() != n) throw std::invalid_argument("queue vector has wrong length");
  if ((state.q.array() < 0).any()) throw std::invalid_argument("queue vector must be nonnegative");
  if (state.sigma < 0 || state.sigma >= spec_->states())
    throw std::invalid_argument("Markov state out of range");
  if (arrival_rates.size() != n) throw std::invalid_argument("arrival vector has wrong length");

  StateCache& c = cache_[state.sigma];
  const Vector q = state.q.cast<double>();
  if (cfg_.kind == PolicyKind::kMaxWeight) {
    c.instance.c.noalias() = c.weighted_expected[0].transpose() * (q + arrival_rates);
    c.instance.b.tail(n) = q;
    return;
  }
  for (int j = 0; j < H; ++j) {
    const Vector weight = 2.0 * (H - j) * q + double(H + 1 + j) * (H - j) * arrival_rates;
    c.instance.c.segment(static_cast<Eigen::Index>(j) * m, m).noalias() =
        c.weighted_expected[j].transpose() * weight;
  }
  const Eigen::Index offset = static_cast<Eigen::Index>(constituency_rows_) * H;
  for (int t = 1; t <= H; ++t) {
    auto rhs = c.instance.b.segment(offset + static_cast<Eigen::Index>(t - 1) * n, n);
    if (t <= cfg_.tau_hard)
      rhs = q;
    else
      rhs = q + t * arrival_rates;
  }
}

const BqpInstance& Controller::program(const QueueState& state, const Vector& arrival_rates) {
  refresh(state, arrival_rates);
  return cache_[state.sigma].instance;
}

BqpSolution Controller::plan(const QueueState& state, const Vector& arrival_rates) {
  const BqpInstance& inst = program(state, arrival_rates);
  return cfg_.kind == PolicyKind::kQuadraticPnc ? solve(inst) : solve_linear(inst);
}

IntVector Controller::decide(const QueueState& state, const Vector& arrival_rates) {
  return plan(state, arrival_rates).u_star.head(spec_->links());
}

IntVector Controller::decide(const QueueState& state) {
  return decide(state, spec_->arrival_rates_at(state.t));
}

IntVector decide(const QueueState& state, const NetworkSpec& spec, const PolicyConfig& cfg) {
  Controller controller(spec, cfg);
  return controller.decide(state);
}

bool mw_equivalence_check(const std::vector<QueueState>& states, const NetworkSpec& spec) {
  Controller mw(spec, PolicyConfig::maxweight());
  Controller lpnc(spec, PolicyConfig::lpnc(1, 1));
  for (const auto& s : states)
    if (mw.decide(s) != lpnc.decide(s)) return false;
  return true;
}

}  // namespace pnc
