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

#include "pnc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace pnc {
namespace {

// Incumbent replacement / pruning slack, relative to the objective scale.
double improvement_eps(double best) { return 1e-12 * (1.0 + std::abs(best)); }

void validate(const BqpInstance& inst) {
  const Eigen::Index N = inst.c.size();
  if (N > kMaxBqpVariables)
    throw std::invalid_argument("BQP has " + std::to_string(N) + " variables; limit is " +
                                std::to_string(kMaxBqpVariables));
  if (inst.Hq.size() != 0) {
    if (inst.Hq.rows() != N || inst.Hq.cols() != N)
      throw std::invalid_argument("Hq must be N x N");
    if ((inst.Hq - inst.Hq.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("Hq must be symmetric");
  }
  if (inst.A.rows() != inst.b.size() || (inst.A.rows() > 0 && inst.A.cols() != N))
    throw std::invalid_argument("constraint system A, b has inconsistent shape");
}

class BranchAndBound {
 public:
  BranchAndBound(const BqpInstance& inst, bool quadratic)
      : inst_(inst),
        n_(static_cast<int>(inst.c.size())),
        k_(static_cast<int>(inst.A.rows())),
        quadratic_(quadratic && inst.Hq.size() != 0) {
    u_.assign(n_, 0);
    best_u_.assign(n_, 0);
    gain_.assign(inst.c.data(), inst.c.data() + n_);
    activity_.assign(k_, 0.0);
    // Most negative remaining contribution of free variables to each row.
    row_slack_.assign(static_cast<std::size_t>(k_) * (n_ + 1), 0.0);
    for (int r = 0; r < k_; ++r)
      for (int j = n_ - 1; j >= 0; --j)
        row_slack_[r * (n_ + 1) + j] =
            row_slack_[r * (n_ + 1) + j + 1] + std::min(0.0, inst.A(r, j));
    if (quadratic_) {
      sym_ = 0.5 * (inst.Hq + inst.Hq.transpose());
      // neg_tail_(j, k): sum over l >= k, l != j of min(0, S_jl).
      neg_tail_ = Matrix::Zero(n_, n_ + 1);
      for (int j = 0; j < n_; ++j)
        for (int k = n_ - 1; k >= 0; --k)
          neg_tail_(j, k) = neg_tail_(j, k + 1) + (k == j ? 0.0 : std::min(0.0, sym_(j, k)));
    }
  }

  BqpSolution run() {
    descend(0, 0.0);
    if (!found_) throw InfeasibleProgram("binary program has no feasible point");
    BqpSolution sol;
    sol.u_star.resize(n_);
    for (int j = 0; j < n_; ++j) sol.u_star(j) = best_u_[j];
    sol.value = objective(inst_, sol.u_star);
    sol.nodes_explored = nodes_;
    return sol;
  }

 private:
  bool rows_satisfiable(int next) const {
    for (int r = 0; r < k_; ++r)
      if (activity_[r] + row_slack_[r * (n_ + 1) + next] > inst_.b(r) + kFeasibilityTol) return false;
    return true;
  }

  double lower_bound(int next, double cost) const {
    double bound = cost;
    for (int j = next; j < n_; ++j) {
      double best_gain = gain_[j];
      if (quadratic_) best_gain += sym_(j, j) + neg_tail_(j, next);
      bound += std::min(0.0, best_gain);
    }
    return bound;
  }

  void descend(int k, double cost) {
    ++nodes_;
    if (!rows_satisfiable(k)) return;
    if (found_ && lower_bound(k, cost) >= best_value_ - improvement_eps(best_value_)) return;
    if (k == n_) {
      found_ = true;
      best_value_ = cost;
      best_u_ = u_;
      return;
    }
    descend(k + 1, cost);

    const double step_cost = gain_[k] + (quadratic_ ? sym_(k, k) : 0.0);
    u_[k] = 1;
    for (int r = 0; r < k_; ++r) activity_[r] += inst_.A(r, k);
    if (quadratic_)
      for (int j = k + 1; j < n_; ++j) gain_[j] += 2.0 * sym_(k, j);
    descend(k + 1, cost + step_cost);
    if (quadratic_)
      for (int j = k + 1; j < n_; ++j) gain_[j] -= 2.0 * sym_(k, j);
    for (int r = 0; r < k_; ++r) activity_[r] -= inst_.A(r, k);
    u_[k] = 0;
  }

  const BqpInstance& inst_;
  int n_;
  int k_;
  bool quadratic_;
  Matrix sym_;
  Matrix neg_tail_;
  std::vector<int> u_;
  std::vector<int> best_u_;
  std::vector<double> gain_;
  std::vector<double> activity_;
  std::vector<double> row_slack_;
  double best_value_ = std::numeric_limits<double>::infinity();
  bool found_ = false;
  std::int64_t nodes_ = 0;
};

}  // namespace

double objective(const BqpInstance& inst, const IntVector& u) {
  const Vector x = u.cast<double>();
  double value = inst.c.dot(x);
  if (inst.Hq.size() != 0) value += x.dot(inst.Hq * x);
  return value;
}

bool is_feasible(const BqpInstance& inst, const IntVector& u, double tol) {
  if (inst.A.rows() == 0) return true;
  return ((inst.A * u.cast<double>() - inst.b).array() <= tol).all();
}

BqpSolution solve(const BqpInstance& inst) {
  validate(inst);
  return BranchAndBound(inst, true).run();
}

BqpSolution solve_linear(const BqpInstance& inst) {
  validate(inst);
  if (inst.Hq.size() != 0 && inst.Hq.cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("solve_linear requires Hq == 0");
  return BranchAndBound(inst, false).run();
}

BqpSolution solve_exhaustive(const BqpInstance& inst) {
  validate(inst);
  const int n = static_cast<int>(inst.c.size());
  if (n > 20) throw std::invalid_argument("exhaustive enumeration is limited to N <= 20");
  BqpSolution best;
  bool found = false;
  IntVector u(n);
  // Enumerate in lexicographic order: coordinate 0 is the most significant bit.
  for (std::uint32_t code = 0; code < (std::uint32_t{1} << n); ++code) {
    for (int j = 0; j < n; ++j) u(j) = (code >> (n - 1 - j)) & 1u;
    ++best.nodes_explored;
    if (!is_feasible(inst, u)) continue;
    const double value = objective(inst, u);
    if (!found || value < best.value - improvement_eps(best.value)) {
      found = true;
      best.value = value;
      best.u_star = u;
    }
  }
  if (!found) throw InfeasibleProgram("binary program has no feasible point");
  return best;
}

}  // namespace pnc
