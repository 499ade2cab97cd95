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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pnc/expect.hpp"
#include "pnc/scenario.hpp"

namespace pnc {
namespace {

IntVector iv(std::initializer_list<int> xs) {
  IntVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (int x : xs) v(i++) = x;
  return v;
}

Vector dv(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("clamp_minus keeps only nonpositive entries") {
  Matrix b(2, 3);
  b << -2, -1, -5, 0, 1, -1;
  Matrix want(2, 3);
  want << -2, -1, -5, 0, 0, -1;
  CHECK(clamp_minus(b) == want);
  CHECK(clamp_minus(Matrix::Zero(3, 2)) == Matrix::Zero(3, 2));
  const Matrix neg = -Matrix::Ones(2, 2);
  CHECK(clamp_minus(neg) == neg);
}

TEST_CASE("markov_dist on the natural example") {
  const NetworkSpec spec = natural_scenario().spec;
  CHECK(markov_dist(spec, 0, 0) == dv({1.0, 0.0}));
  CHECK(max_abs(markov_dist(spec, 0, 1) - dv({0.1, 0.9})) < 1e-15);
  // Fixed point of P pi = pi: 0.9 pi_1 = 0.2 pi_2.
  CHECK(max_abs(markov_dist(spec, 0, 1000000) - dv({2.0 / 11.0, 9.0 / 11.0})) < 1e-9);
  CHECK(max_abs(markov_dist(spec, 1, 1000000) - dv({2.0 / 11.0, 9.0 / 11.0})) < 1e-9);
}

TEST_CASE("expected_B examples") {
  const NetworkSpec natural = natural_scenario().spec;
  CHECK(expected_B(natural, 0, 0) == natural.link_matrix.cast<double>());
  Matrix t1(3, 2);
  t1 << -0.3, 0, 0.3, -1, 0, -1;
  CHECK(max_abs(expected_B(natural, 0, 1) - t1) < 1e-15);

  const NetworkSpec generic = generic_scenario().spec;
  for (int t = 0; t < 5; ++t) CHECK(expected_B(generic, 0, t) == generic.link_matrix.cast<double>());
}

TEST_CASE("expected_queue examples") {
  const NetworkSpec spec = generic_scenario().spec;
  const IntVector none = IntVector::Zero(6);
  CHECK(expected_queue(iv({5, 3}), 0, none, spec, Vector::Zero(2), 2) == dv({5, 3}));
  CHECK(max_abs(expected_queue(iv({5, 3}), 0, none, spec, dv({2.4, 0.5}), 2) - dv({9.8, 4})) < 1e-12);
  CHECK(max_abs(expected_queue(iv({5, 0}), 0, iv({0, 1, 0, 0, 0, 0}), spec, dv({2.4, 0}), 1) -
                dv({6.4, 1})) < 1e-12);
  CHECK_THROWS(expected_queue(iv({5, 0}), 0, none, spec, dv({0, 0}), 3));
}

TEST_CASE("expected_cross examples") {
  const NetworkSpec natural = natural_scenario().spec;
  const Matrix I3 = Matrix::Identity(3, 3);
  const Matrix good = natural.weighted_links(0);
  const Matrix bad = natural.weighted_links(1);
  CHECK(max_abs(expected_cross(natural, 0, 0, 0, I3) - good.transpose() * good) < 1e-14);
  CHECK(max_abs(expected_cross(natural, 1, 0, 0, I3) - bad.transpose() * bad) < 1e-14);
  const Matrix want10 = (0.1 * good + 0.9 * bad).transpose() * good;
  CHECK(max_abs(expected_cross(natural, 0, 1, 0, I3) - want10) < 1e-14);
  CHECK(max_abs(expected_cross(natural, 0, 1, 0, I3) - oracle::expected_cross(natural, 0, 1, 0, I3)) < 1e-14);

  const NetworkSpec generic = generic_scenario().spec;
  const Matrix B = generic.link_matrix.cast<double>();
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      CHECK(max_abs(expected_cross(generic, 0, k, l, Matrix::Identity(2, 2)) - B.transpose() * B) < 1e-14);

  Matrix asym = Matrix::Identity(3, 3);
  asym(0, 1) = 1.0;
  CHECK_THROWS(expected_cross(natural, 0, 1, 0, asym));
}

TEST_CASE("expanded and mixture forms agree with path enumeration") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4, m = 1 + (trial / 2) % 4, p = 1 + (trial / 3) % 4;
    const NetworkSpec spec = oracle::random_spec(rng, n, m, p);
    const ExpandedModel expanded(spec);
    Matrix Q = Matrix::Random(n, n);
    Q = Q * Q.transpose() + Matrix::Identity(n, n);
    const int s0 = trial % p;
    for (int k = 0; k <= 4; ++k) {
      const Matrix eb = expected_B(spec, s0, k);
      CHECK(max_abs(eb - expanded.expected_B(s0, k)) < 1e-12);
      CHECK(max_abs(eb - oracle::expected_B(spec, s0, k)) < 1e-12);
      for (int l = 0; l <= 4; ++l) {
        const Matrix cross = expected_cross(spec, s0, k, l, Q);
        CHECK(max_abs(cross - oracle::expected_cross(spec, s0, k, l, Q)) < 1e-12);
        CHECK(max_abs(cross - expanded.expected_cross(s0, k, l, Q)) < 1e-12);
        CHECK(max_abs(cross - expected_cross(spec, s0, l, k, Q).transpose()) < 1e-14);
      }
    }
  }
}

TEST_CASE("expanded model shapes") {
  const NetworkSpec spec = natural_scenario().spec;
  const ExpandedModel ex(spec);
  CHECK(ex.p_hat().rows() == 6);
  CHECK(ex.b_hat().rows() == 6);
  CHECK(ex.b_hat().cols() == 2);
  CHECK(ex.b_hat().topRows(3) == spec.weighted_links(0));
  CHECK(ex.b_hat().bottomRows(3) == spec.weighted_links(1));
  CHECK(ex.e_hat(1).block(3, 0, 3, 3) == Matrix::Identity(3, 3));
}

TEST_CASE("assemble_costs collapses at H = 1") {
  const NetworkSpec spec = natural_scenario().spec;
  const IntVector q0 = iv({4, 2, 7});
  const Vector a = dv({0.5, 0.0, 0.9});
  const Matrix Q = Matrix::Identity(3, 3);
  Matrix R = Matrix::Identity(2, 2) * 0.5;
  const CostTerms c = assemble_costs(q0, 0, spec, a, 1, Q, R);
  const Matrix B0 = spec.weighted_links(0);
  const Vector want_l = 2.0 * (B0.transpose() * (q0.cast<double>() + a));
  CHECK(max_abs(c.linear - want_l) < 1e-12);
  CHECK(max_abs(c.quadratic - (B0.transpose() * B0 + R)) < 1e-12);
}

TEST_CASE("assemble_costs with Q = 0 and R = I") {
  const NetworkSpec spec = natural_scenario().spec;
  const CostTerms c = assemble_costs(iv({4, 2, 7}), 1, spec, dv({0.5, 0, 0.9}), 3, Matrix::Zero(3, 3),
                                     Matrix::Identity(2, 2));
  CHECK(max_abs(c.linear) == 0.0);
  CHECK(max_abs(c.quadratic - Matrix::Identity(6, 6)) == 0.0);
  CHECK(c.constant == 0.0);
}

TEST_CASE("assemble_costs reproduces the path-enumeration cost") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const NetworkSpec spec = oracle::random_spec(rng, 2, 2, 2);
    const int H = 3;
    IntVector q0(2);
    q0 << static_cast<int>(rng() % 7), static_cast<int>(rng() % 7);
    const Vector rates = spec.arrival_rates_at(0);
    Matrix Q = Matrix::Random(2, 2);
    Q = Q * Q.transpose() + Matrix::Identity(2, 2);
    Matrix R = Matrix::Random(2, 2);
    R = R * R.transpose();
    const int s0 = trial % 2;
    const CostTerms c = assemble_costs(q0, s0, spec, rates, H, Q, R);
    CHECK(max_abs(c.quadratic - c.quadratic.transpose()) < 1e-10);
    for (int code = 0; code < 64; ++code) {
      IntVector u(6);
      for (int j = 0; j < 6; ++j) u(j) = (code >> j) & 1;
      const Vector x = u.cast<double>();
      const double assembled = c.constant + c.linear.dot(x) + x.dot(c.quadratic * x);
      const double brute = oracle::path_cost(q0, s0, spec, rates, H, Q, R, u);
      CHECK(assembled == doctest::Approx(brute).epsilon(1e-12).scale(1.0));
      CHECK(std::abs(assembled - brute) < 1e-9);
    }
  }
}

TEST_CASE("assemble_costs rejects non-symmetric weights") {
  const NetworkSpec spec = generic_scenario().spec;
  Matrix Q = Matrix::Identity(2, 2);
  Q(0, 1) = 0.3;
  CHECK_THROWS(assemble_costs(iv({0, 0}), 0, spec, dv({0, 0}), 2, Q, Matrix::Zero(3, 3)));
  Matrix R = Matrix::Zero(3, 3);
  R(2, 0) = 1.0;
  CHECK_THROWS(assemble_costs(iv({0, 0}), 0, spec, dv({0, 0}), 2, Matrix::Identity(2, 2), R));
}

TEST_CASE("assemble_constraints: link 3 needs buffer 2") {
  const NetworkSpec spec = generic_scenario().spec;
  const ConstraintSystem cs = assemble_constraints(iv({5, 0}), 0, spec, dv({2.4, 0}), 2, 2);
  const Vector u = dv({0, 0, 1, 0, 0, 0});
  // q0 + (-5, -1) = (0, -1) in row 1.
  const Vector slack = cs.d - cs.D * u;
  CHECK(slack(0) == 0.0);
  CHECK(slack(1) == -1.0);
  CHECK(cs.D.topRightCorner(2, 3) == Matrix::Zero(2, 3));
}

TEST_CASE("assemble_constraints at H = 1 matches is_admissible") {
  const NetworkSpec spec = generic_scenario().spec;
  for (int q1 = 0; q1 < 7; ++q1) {
    for (int q2 = 0; q2 < 3; ++q2) {
      const IntVector q = iv({q1, q2});
      const ConstraintSystem cs = assemble_constraints(q, 0, spec, dv({2.4, 0}), 1, 1);
      for (int j = 0; j < 3; ++j) {
        IntVector u = IntVector::Zero(3);
        u(j) = 1;
        const bool rows_ok = ((cs.D * u.cast<double>() - cs.d).array() <= 1e-9).all();
        CHECK(rows_ok == is_admissible(q, u, spec));
      }
    }
  }
}

TEST_CASE("assemble_constraints soft rows use expectations and arrival credit") {
  const NetworkSpec spec = natural_scenario().spec;
  const Vector a = dv({0.5, 0.0, 0.9});
  const ConstraintSystem cs = assemble_constraints(iv({3, 0, 1}), 0, spec, a, 3, 1);
  const Matrix full = spec.link_matrix.cast<double>();
  CHECK(cs.D.block(0, 0, 3, 2) == -clamp_minus(full));
  CHECK(max_abs(cs.D.block(3, 0, 3, 2) + expected_B(spec, 0, 0)) < 1e-15);
  CHECK(max_abs(cs.D.block(3, 2, 3, 2) + clamp_minus(expected_B(spec, 0, 1))) < 1e-15);
  CHECK(max_abs(cs.d.segment(3, 3) - (dv({3, 0, 1}) + 2 * a)) < 1e-15);
  CHECK(max_abs(cs.d.segment(6, 3) - (dv({3, 0, 1}) + 3 * a)) < 1e-15);
  CHECK_THROWS(assemble_constraints(iv({3, 0, 1}), 0, spec, a, 3, 0));
  CHECK_THROWS(assemble_constraints(iv({3, 0, 1}), 0, spec, a, 3, 4));
}

TEST_CASE("zero trajectory is feasible and hard rows are the most restrictive") {
  // With unit success weights E[B_j] = B, so soft rows only add arrival credit.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    NetworkSpec spec = oracle::random_spec(rng, 2, 2, 2);
    for (auto& w : spec.success_weights) w.setOnes();
    IntVector q(2);
    q << static_cast<int>(rng() % 6), static_cast<int>(rng() % 6);
    const Vector rates = spec.arrival_rates_at(0);
    const int H = 3;
    std::vector<ConstraintSystem> by_tau;
    for (int tau = 1; tau <= H; ++tau) by_tau.push_back(assemble_constraints(q, trial % 2, spec, rates, H, tau));
    for (const auto& cs : by_tau) CHECK((cs.d.array() >= 0.0).all());
    for (int code = 0; code < 64; ++code) {
      IntVector u(6);
      for (int j = 0; j < 6; ++j) u(j) = (code >> j) & 1;
      const Vector x = u.cast<double>();
      const bool all_hard = ((by_tau[H - 1].D * x - by_tau[H - 1].d).array() <= 1e-9).all();
      if (!all_hard) continue;
      for (const auto& cs : by_tau) CHECK(((cs.D * x - cs.d).array() <= 1e-9).all());
    }
  }
}

TEST_CASE("soft rows discount unreliable upstream transfers") {
  // Link 1 moves a packet from buffer 1 to 2 with success 1/2, link 2 drains
  // buffer 2. Worst-case rows credit the full transfer, soft rows only its mean.
  NetworkSpec spec;
  spec.link_matrix.resize(2, 2);
  spec.link_matrix << -1, 0, 1, -1;
  spec.constituency = IntMatrix::Ones(1, 2);
  spec.transition = Matrix::Ones(1, 1);
  spec.success_weights = {dv({0.5, 1.0})};
  spec.arrivals = {ArrivalProcess{}, ArrivalProcess{}};
  const Vector u = dv({1, 0, 0, 1});
  const auto hard = assemble_constraints(iv({1, 0}), 0, spec, dv({0, 0}), 2, 2);
  const auto soft = assemble_constraints(iv({1, 0}), 0, spec, dv({0, 0}), 2, 1);
  CHECK(((hard.D * u - hard.d).array() <= 0.0).all());
  CHECK_FALSE(((soft.D * u - soft.d).array() <= 0.0).all());
}

TEST_CASE("large queues leave every trajectory feasible") {
  const NetworkSpec spec = generic_scenario().spec;
  const ConstraintSystem cs = assemble_constraints(iv({1000000, 1000000}), 0, spec, dv({2.4, 0}), 3, 3);
  for (int code = 0; code < 512; ++code) {
    Vector x(9);
    for (int j = 0; j < 9; ++j) x(j) = (code >> j) & 1;
    CHECK(((cs.D * x - cs.d).array() <= 0.0).all());
  }
}

}  // namespace pnc
