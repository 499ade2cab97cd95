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

#include "pnc/expect.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pnc {
namespace {

Matrix matrix_power(const Matrix& a, int t) {
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix base = a;
  while (t > 0) {
    if (t & 1) result = result * base;
    base = base * base;
    t >>= 1;
  }
  return result;
}

void check_state(const NetworkSpec& spec, int sigma) {
  if (sigma < 0 || sigma >= spec.states()) throw std::invalid_argument("Markov state out of range");
}

void check_time(int t) {
  if (t < 0) throw std::invalid_argument("time index must be nonnegative");
}

}  // namespace

void require_symmetric(const Matrix& a, const char* name, double tol) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(name) + " must be square");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument(std::string(name) + " must be symmetric");
}

Vector markov_dist(const NetworkSpec& spec, int sigma0, int t) {
  check_state(spec, sigma0);
  check_time(t);
  return matrix_power(spec.transition, t).col(sigma0);
}

Matrix expected_B(const NetworkSpec& spec, int sigma0, int t) {
  const Vector dist = markov_dist(spec, sigma0, t);
  Matrix acc = Matrix::Zero(spec.buffers(), spec.links());
  for (int j = 0; j < spec.states(); ++j)
    if (dist(j) != 0.0) acc += dist(j) * spec.weighted_links(j);
  return acc;
}

Vector expected_queue(const IntVector& q0, int sigma0, const ControlTrajectory& controls,
                      const NetworkSpec& spec, const Vector& arrival_rates, int t) {
  const int m = spec.links();
  if (t < 1 || static_cast<Eigen::Index>(t) * m > controls.size())
    throw std::invalid_argument("expected_queue needs 1 <= t <= H");
  Vector q = q0.cast<double>() + t * arrival_rates;
  for (int i = 0; i < t; ++i)
    q += expected_B(spec, sigma0, i) * controls.segment(i * m, m).cast<double>();
  return q;
}

Matrix expected_cross(const NetworkSpec& spec, int sigma0, int k, int l, const Matrix& Q) {
  check_time(k);
  check_time(l);
  require_symmetric(Q, "Q");
  if (k < l) return expected_cross(spec, sigma0, l, k, Q).transpose();
  const int p = spec.states();
  const Vector dist_l = markov_dist(spec, sigma0, l);
  const Matrix ahead = matrix_power(spec.transition, k - l);
  Matrix acc = Matrix::Zero(spec.links(), spec.links());
  for (int j = 0; j < p; ++j) {
    if (dist_l(j) == 0.0) continue;
    Matrix later = Matrix::Zero(spec.buffers(), spec.links());
    for (int i = 0; i < p; ++i)
      if (ahead(i, j) != 0.0) later += ahead(i, j) * spec.weighted_links(i);
    acc += dist_l(j) * later.transpose() * Q * spec.weighted_links(j);
  }
  return acc;
}

ExpandedModel::ExpandedModel(const NetworkSpec& spec)
    : n_(spec.buffers()), m_(spec.links()), p_(spec.states()) {
  p_hat_ = Eigen::kroneckerProduct(spec.transition, Matrix::Identity(n_, n_)).eval();
  b_hat_.resize(static_cast<Eigen::Index>(p_) * n_, m_);
  weighted_.reserve(p_);
  for (int i = 0; i < p_; ++i) {
    weighted_.push_back(spec.weighted_links(i));
    b_hat_.middleRows(static_cast<Eigen::Index>(i) * n_, n_) = weighted_.back();
  }
}

Matrix ExpandedModel::e_hat(int sigma) const {
  if (sigma < 0 || sigma >= p_) throw std::invalid_argument("Markov state out of range");
  Vector e = Vector::Zero(p_);
  e(sigma) = 1.0;
  return Eigen::kroneckerProduct(e, Matrix::Identity(n_, n_)).eval();
}

Matrix ExpandedModel::p_power_selected(int sigma, int t) const {
  check_time(t);
  Matrix x = e_hat(sigma);
  for (int s = 0; s < t; ++s) x = p_hat_ * x;
  return x;
}

Matrix ExpandedModel::expected_B(int sigma0, int t) const {
  return p_power_selected(sigma0, t).transpose() * b_hat_;
}

Matrix ExpandedModel::expected_cross(int sigma0, int k, int l, const Matrix& Q) const {
  require_symmetric(Q, "Q");
  if (k < l) return expected_cross(sigma0, l, k, Q).transpose();
  // Each n x n block of P_hat^l e_hat(sigma0) is Pr[sigma_l = j] * I_n.
  const Matrix reach = p_power_selected(sigma0, l);
  Matrix acc = Matrix::Zero(m_, m_);
  for (int j = 0; j < p_; ++j) {
    const double weight = reach(static_cast<Eigen::Index>(j) * n_, 0);
    const Matrix later = b_hat_.transpose() * p_power_selected(j, k - l);  // m x n
    acc += weight * later * Q * weighted_[j];
  }
  return acc;
}

CostTerms assemble_costs(const IntVector& q0, int sigma0, const NetworkSpec& spec,
                         const Vector& arrival_rates, int H, const Matrix& Q, const Matrix& R) {
  if (H < 1) throw std::invalid_argument("horizon must be >= 1");
  const int n = spec.buffers();
  const int m = spec.links();
  require_symmetric(Q, "Q");
  require_symmetric(R, "R");
  if (Q.rows() != n) throw std::invalid_argument("Q must be n x n");
  if (R.rows() != m) throw std::invalid_argument("R must be m x m");
  if (q0.size() != n || arrival_rates.size() != n)
    throw std::invalid_argument("queue and arrival vectors must have n entries");

  const Vector q = q0.cast<double>();
  CostTerms terms;
  for (int i = 1; i <= H; ++i) {
    const Vector drift = q + i * arrival_rates;
    terms.constant += drift.dot(Q * drift);
  }

  terms.linear.resize(static_cast<Eigen::Index>(m) * H);
  for (int j = 0; j < H; ++j) {
    const Vector weight = 2.0 * (H - j) * q + double(H + 1 + j) * (H - j) * arrival_rates;
    terms.linear.segment(static_cast<Eigen::Index>(j) * m, m) =
        (weight.transpose() * Q * expected_B(spec, sigma0, j)).transpose();
  }

  const Eigen::Index N = static_cast<Eigen::Index>(m) * H;
  terms.quadratic = Matrix::Zero(N, N);
  for (int k = 0; k < H; ++k) {
    for (int l = 0; l <= k; ++l) {
      const Matrix block = double(H - std::max(k, l)) * expected_cross(spec, sigma0, k, l, Q);
      terms.quadratic.block(static_cast<Eigen::Index>(k) * m, static_cast<Eigen::Index>(l) * m, m, m) = block;
      if (k != l)
        terms.quadratic.block(static_cast<Eigen::Index>(l) * m, static_cast<Eigen::Index>(k) * m, m, m) =
            block.transpose();
    }
    terms.quadratic.block(static_cast<Eigen::Index>(k) * m, static_cast<Eigen::Index>(k) * m, m, m) += R;
  }
  return terms;
}

ConstraintSystem assemble_constraints(const IntVector& q0, int sigma0, const NetworkSpec& spec,
                                      const Vector& arrival_rates, int H, int tau_hard) {
  if (H < 1) throw std::invalid_argument("horizon must be >= 1");
  if (tau_hard < 1 || tau_hard > H)
    throw std::invalid_argument("tau_hard must lie in [1, H], got " + std::to_string(tau_hard));
  const int n = spec.buffers();
  const int m = spec.links();
  if (q0.size() != n || arrival_rates.size() != n)
    throw std::invalid_argument("queue and arrival vectors must have n entries");

  const Matrix full = spec.link_matrix.cast<double>();
  const Matrix full_minus = clamp_minus(full);
  std::vector<Matrix> expected;
  expected.reserve(H);
  for (int j = 0; j < H; ++j) expected.push_back(expected_B(spec, sigma0, j));

  ConstraintSystem cs;
  cs.D = Matrix::Zero(static_cast<Eigen::Index>(n) * H, static_cast<Eigen::Index>(m) * H);
  cs.d.resize(static_cast<Eigen::Index>(n) * H);
  const Vector q = q0.cast<double>();
  for (int t = 1; t <= H; ++t) {
    const bool hard = t <= tau_hard;
    const Eigen::Index row = static_cast<Eigen::Index>(t - 1) * n;
    for (int j = 0; j < t - 1; ++j)
      cs.D.block(row, static_cast<Eigen::Index>(j) * m, n, m) = -(hard ? full : expected[j]);
    cs.D.block(row, static_cast<Eigen::Index>(t - 1) * m, n, m) =
        -(hard ? full_minus : clamp_minus(expected[t - 1]));
    cs.d.segment(row, n) = hard ? q : Vector(q + t * arrival_rates);
  }
  return cs;
}

AssembledProgram assemble_program(const IntVector& q0, int sigma0, const NetworkSpec& spec,
                                  const Vector& arrival_rates, int H, int tau_hard,
                                  const Matrix& Q, const Matrix& R) {
  CostTerms costs = assemble_costs(q0, sigma0, spec, arrival_rates, H, Q, R);
  ConstraintSystem cs = assemble_constraints(q0, sigma0, spec, arrival_rates, H, tau_hard);
  AssembledProgram prog;
  prog.J_l = std::move(costs.linear);
  prog.J_q = std::move(costs.quadratic);
  prog.D = std::move(cs.D);
  prog.d = std::move(cs.d);
  prog.H = H;
  prog.tau_hard = tau_hard;
  return prog;
}

}  // namespace pnc
