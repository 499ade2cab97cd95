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

#ifndef PNC_SOLVER_HPP_
#define PNC_SOLVER_HPP_

#include <cstdint>
#include <stdexcept>

#include "pnc/model.hpp"

namespace pnc {

/// min c u + u^T Hq u  s.t.  A u <= b,  u in {0,1}^N.
struct BqpInstance {
  Vector c;
  Matrix Hq;  // symmetric; may be empty or all-zero for linear programs
  Matrix A;   // K x N
  Vector b;   // K
};

struct BqpSolution {
  IntVector u_star;
  double value = 0.0;
  std::int64_t nodes_explored = 0;
};

class InfeasibleProgram : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxBqpVariables = 30;
inline constexpr double kFeasibilityTol = 1e-9;

/// Exact depth-first branch and bound. Variables are fixed in index order,
/// 0 before 1, and the incumbent is only replaced on strict improvement, so
/// among optimal points the lexicographically smallest one is returned.
/// Throws InfeasibleProgram or std::invalid_argument (bad shapes, N > 30).
BqpSolution solve(const BqpInstance& inst);

/// Same search without quadratic bookkeeping. Requires Hq == 0.
BqpSolution solve_linear(const BqpInstance& inst);

/// Full 2^N enumeration with the same tie-break, for N <= 20.
BqpSolution solve_exhaustive(const BqpInstance& inst);

double objective(const BqpInstance& inst, const IntVector& u);
bool is_feasible(const BqpInstance& inst, const IntVector& u, double tol = kFeasibilityTol);

}  // namespace pnc

#endif  // PNC_SOLVER_HPP_
