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

#ifndef PNC_EXPECT_HPP_
#define PNC_EXPECT_HPP_

#include <vector>

#include "pnc/model.hpp"

namespace pnc {

/// Stacked control trajectory (u_0; u_1; ...; u_{H-1}), length m*H.
using ControlTrajectory = IntVector;

/// Distribution of sigma_t given sigma_0: P^t e_{sigma_0}.
Vector markov_dist(const NetworkSpec& spec, int sigma0, int t);

/// E[B_t | sigma_0] = sum_j Pr[sigma_t = j] B M_j.
Matrix expected_B(const NetworkSpec& spec, int sigma0, int t);

/// E[q_t | q_0, sigma_0] for 1 <= t <= H under the given trajectory.
Vector expected_queue(const IntVector& q0, int sigma0, const ControlTrajectory& controls,
                      const NetworkSpec& spec, const Vector& arrival_rates, int t);

/// E[B_k^T Q B_l | sigma_0]. For k < l this is the transpose of the (l, k)
/// moment. The k == l case uses (B M_j)^T Q (B M_j), i.e. no Bernoulli
/// self-covariance.
Matrix expected_cross(const NetworkSpec& spec, int sigma0, int k, int l, const Matrix& Q);

/// Kronecker-expanded Markov quantities. Holds P (x) I_n and the stack of
/// B M_1 ... B M_p; used as a second route to the same moments.
class ExpandedModel {
 public:
  explicit ExpandedModel(const NetworkSpec& spec);

  const Matrix& p_hat() const { return p_hat_; }
  const Matrix& b_hat() const { return b_hat_; }
  /// e_sigma (x) I_n, a (p*n) x n selector.
  Matrix e_hat(int sigma) const;

  /// (P_hat^t e_hat(sigma0))^T B_hat.
  Matrix expected_B(int sigma0, int t) const;
  /// (P_hat^l e_hat(sigma0))^T stacked over j of B_hat^T P_hat^{k-l} e_hat(j) Q B M_j, k >= l.
  Matrix expected_cross(int sigma0, int k, int l, const Matrix& Q) const;

 private:
  Matrix p_power_selected(int sigma, int t) const;

  int n_, m_, p_;
  Matrix p_hat_;
  Matrix b_hat_;
  std::vector<Matrix> weighted_;
};

struct CostTerms {
  double constant = 0.0;  // J_c
  Vector linear;          // J_l, length m*H
  Matrix quadratic;       // J_q, (m*H) x (m*H), symmetric
};

struct ConstraintSystem {
  Matrix D;  // (n*H) x (m*H), block lower triangular
  Vector d;  // n*H
};

struct AssembledProgram {
  Vector J_l;
  Matrix J_q;
  Matrix D;
  Vector d;
  int H = 1;
  int tau_hard = 1;
};

/// Expected quadratic cost of a trajectory split into constant, linear and
/// quadratic parts: J = J_c + J_l u + u^T J_q u.
CostTerms assemble_costs(const IntVector& q0, int sigma0, const NetworkSpec& spec,
                         const Vector& arrival_rates, int H, const Matrix& Q, const Matrix& R);

/// Nonnegativity of predicted queues in D u <= d form. Block-rows
/// 1..tau_hard are worst case (full link matrix, no arrival credit); the
/// remaining rows hold only in expectation. The last block of each row is
/// minus-clamped so a packet cannot traverse two buffers in one slot.
ConstraintSystem assemble_constraints(const IntVector& q0, int sigma0, const NetworkSpec& spec,
                                      const Vector& arrival_rates, int H, int tau_hard);

AssembledProgram assemble_program(const IntVector& q0, int sigma0, const NetworkSpec& spec,
                                  const Vector& arrival_rates, int H, int tau_hard,
                                  const Matrix& Q, const Matrix& R);

/// Throws std::invalid_argument unless `a` is square and symmetric within tol.
void require_symmetric(const Matrix& a, const char* name, double tol = 1e-10);

}  // namespace pnc

#endif  // PNC_EXPECT_HPP_
