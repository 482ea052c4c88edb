// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ddef/operators.hpp"
#include "support.hpp"

using namespace ddef;
using testing::make_ops;

TEST_CASE("build_mesh boundaries") {
  SUBCASE("m=1, k=3") {
    auto mesh = build_mesh(testing::zero_problem(), 3, 4);
    REQUIRE(mesh->boundaries().size() == 4);
    CHECK(mesh->boundaries()[0] == doctest::Approx(-1.0));
    CHECK(mesh->boundaries()[1] == doctest::Approx(-2.0 / 3.0));
    CHECK(mesh->boundaries()[2] == doctest::Approx(-1.0 / 3.0));
    CHECK(mesh->boundaries()[3] == doctest::Approx(0.0));
  }
  SUBCASE("m=2, k=2 spans [-2,0]") {
    PeriodicDDE dde = testing::random_2d_m2_problem(1);
    auto mesh = build_mesh(dde, 2, 4);
    CHECK(mesh->boundaries().front() == doctest::Approx(-2.0));
    CHECK(mesh->boundaries().back() == doctest::Approx(0.0));
    CHECK(mesh->boundaries().size() == 5);
  }
  SUBCASE("m=1, k=1 single subinterval") {
    auto mesh = build_mesh(testing::zero_problem(), 1, 4);
    CHECK(mesh->boundaries().size() == 2);
    CHECK(mesh->panel_count() == 1);
  }
  SUBCASE("sec3 with k=1 splits at the delay image") {
    auto mesh = build_mesh(testing::sec3_problem(), 1, 4);
    CHECK(mesh->panel_count() == 2);
    CHECK(mesh->panels()[0].b == doctest::Approx(-0.5));
  }
}

TEST_CASE("S / Gamma+ / Gamma- behave as maps") {
  auto ops = make_ops(testing::sec3_problem(), 3, 8);
  const int nk = ops.nk();
  std::mt19937_64 rng(3);
  GridVector v(nk);
  for (int i = 0; i < nk; ++i)
    v[i] = Complex(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1));

  SUBCASE("gamma_plus(apply_S(v)) == v") {
    const GridVector w = gamma_plus(ops, apply_S(ops, v));
    CHECK((w - v).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("Gamma+ S = I as assembled matrices") {
    CHECK((ops.Gp * ops.S - Eigen::MatrixXd::Identity(nk, nk)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("gamma_minus at mu=0 drops x(0)-") {
    PiecewiseFunction x = apply_S(ops, v);
    const GridVector g = gamma_minus(ops, Complex(0, 0), x);
    CHECK(std::abs(g[0]) == 0.0);
  }
  SUBCASE("constant function: gamma_minus = [mu c, c, ..., c]") {
    PiecewiseFunction x(ops.mesh, Eigen::VectorXcd::Constant(ops.dofs(), Complex(2.0, 0)));
    const Complex mu(0.3, 0.1);
    const GridVector g = gamma_minus(ops, mu, x);
    CHECK(std::abs(g[0] - mu * 2.0) <= 1e-15);
    for (int i = 1; i < ops.nk(); ++i) CHECK(std::abs(g[i] - 2.0) <= 1e-15);
  }
}

TEST_CASE("assemble: zero RHS gives piecewise constants") {
  auto ops = make_ops(testing::zero_problem(), 3, 6);
  CHECK(ops.M0.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ops.L.cwiseAbs().maxCoeff() == 0.0);
  GridVector v(3);
  v << 1.0, Complex(0, 2.0), -0.5;
  // fixed point x = Sv when M = 0
  PiecewiseFunction x = apply_S(ops, v);
  CHECK(std::abs(x.eval(-0.9)[0] - v[0]) <= 1e-15);
  CHECK(std::abs(x.eval(-0.5)[0] - v[1]) <= 1e-15);
  CHECK(std::abs(x.eval(-0.1)[0] - v[2]) <= 1e-15);
}

TEST_CASE("assemble: k=1 spectral radius of (I-M0)^{-1} L matches the pole") {
  auto ops = make_ops(testing::sec3_problem(), 1, 16);
  const int N = ops.dofs();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(N, N) - ops.M0);
  Eigen::EigenSolver<Eigen::MatrixXd> es(lu.solve(ops.L), false);
  double rho = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    rho = std::max(rho, std::abs(es.eigenvalues()[i]));
  CHECK(rho == doctest::Approx(1.0 / 1.8535).epsilon(2e-3));
}

TEST_CASE("assemble: exact exponential solve") {
  // x' = a x, a = ln 2: for k=1, (I - M(mu))^{-1} S applied to v=1 gives
  // x(0) = 2; for k>1 the restart values must sample e^{a(t_i+1)}
  const double a = std::log(2.0);
  for (int k : {1, 3}) {
    auto ops = make_ops(testing::ode_problem(a), k, 12);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ops.i_minus_m(Complex(0.7, 0.2)));
    GridVector v(ops.nk());
    for (int i = 0; i < k; ++i) v[i] = std::exp(a * (static_cast<double>(i) / k));
    PiecewiseFunction x(ops.mesh, lu.solve(ops.S.cast<Complex>() * v));
    CHECK(std::abs(x.eval_left(0.0)[0] - 2.0) <= 1e-12);
    CHECK(x.max_jump() <= 1e-12);
  }
}

TEST_CASE("operator norm bound and halving") {
  auto b = compute_bounds(testing::sec3_problem());
  SUBCASE("(4.10) at |mu| = 1 with 5% slack") {
    auto ops = make_ops(testing::sec3_problem(), 4, 16);
    CHECK(operator_norm_inf(ops, 1.0) <= (b.sup_A + 1.0 * b.sup_B_total) / 4.0 * 1.05);
  }
  SUBCASE("zero dde gives zero norm") {
    auto ops = make_ops(testing::zero_problem(), 2, 6);
    CHECK(operator_norm_inf(ops, 1.0) == 0.0);
  }
  SUBCASE("doubling k halves the norm") {
    auto ops2 = make_ops(testing::sec3_problem(), 2, 16);
    auto ops4 = make_ops(testing::sec3_problem(), 4, 16);
    CHECK(operator_norm_inf(ops4, 1.0) <= 0.55 * operator_norm_inf(ops2, 1.0));
  }
}

TEST_CASE("select_k") {
  SUBCASE("m=1 rule") {
    CoefficientBounds b;
    b.sup_B_total = 1.0;
    CHECK(select_k(b, 3.0, 1) == 4);
    CHECK(select_k(b, 1.9, 1) == 2);
    CHECK_THROWS_AS(select_k(b, 0.5, 1), std::invalid_argument);
  }
  SUBCASE("m=2 weighted-norm rule") {
    CoefficientBounds b;
    b.V_bar = 1.0;
    // smallest k with 2^{1/k} < 1 + (0.02/8) log 2
    const int k = select_k(b, 2.0, 2);
    CHECK(k == 401);
    CHECK(std::pow(2.0, 1.0 / k) < 1.0 + 0.02 / 8.0 * std::log(2.0));
    CHECK(std::pow(2.0, 1.0 / (k - 1)) >= 1.0 + 0.02 / 8.0 * std::log(2.0));
  }
  SUBCASE("guaranteed_radius inverts select_k") {
    CoefficientBounds b;
    b.sup_A = 0.3;
    b.sup_B_total = 0.9;
    const int k = select_k(b, 2.0, 1);
    CHECK(guaranteed_radius(b, k, 1) >= 2.0);
    CHECK(guaranteed_radius(b, k - 1, 1) < 2.0);
  }
}

TEST_CASE("weighted_norm") {
  PeriodicDDE dde = testing::random_2d_m2_problem(5);
  auto ops = make_ops(dde, 2, 6);
  SUBCASE("R = 1 is the sup norm; constants see the t=0 weight") {
    PiecewiseFunction x(ops.mesh, Eigen::VectorXcd::Constant(ops.dofs(), 1.0));
    CHECK(x.weighted_norm(1.0) == doctest::Approx(1.0));
    CHECK(x.weighted_norm(2.0) == doctest::Approx(1.0)); // max of 2^t on [-2,0] at t=0
  }
  SUBCASE("backshift scales by R^{-1}") {
    std::mt19937_64 rng(11);
    Eigen::VectorXcd dofs(ops.dofs());
    for (Eigen::Index i = 0; i < dofs.size(); ++i) dofs[i] = testing::uniform(rng, -1, 1);
    PiecewiseFunction x(ops.mesh, dofs);
    // y(t) = x(1+t) for t <= -1, 0 above: panels align under the unit shift
    Eigen::VectorXcd sh = Eigen::VectorXcd::Zero(ops.dofs());
    const Mesh &mesh = *ops.mesh;
    for (int j = 0; j < mesh.panel_count(); ++j) {
      if (mesh.panels()[j].sub >= 0) continue;
      for (int q = 0; q <= mesh.p(); ++q) {
        const Eigen::VectorXcd val = x.eval_side(1.0 + mesh.node_coord(j, q), q == mesh.p() ? -1 : +1);
        for (int c = 0; c < mesh.n(); ++c) sh[mesh.dof(j, q, c)] = val[c];
      }
    }
    PiecewiseFunction y(ops.mesh, sh);
    const double R = 2.0;
    CHECK(y.weighted_norm(R) <= x.weighted_norm(R) / R * (1.0 + 1e-12));
  }
}

TEST_CASE("causality: Gamma_-(0) (I-M0)^{-1} S is strictly block lower triangular") {
  auto ops = make_ops(testing::random_2d_problem(17), 4, 10);
  const int N = ops.dofs(), nk = ops.nk(), n = ops.n();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(N, N) - ops.M0);
  const Eigen::MatrixXd C = ops.Gm0 * lu.solve(ops.S);
  for (int bi = 0; bi < ops.mesh->k(); ++bi)
    for (int bj = bi; bj < ops.mesh->k(); ++bj)
      CHECK(C.block(bi * n, bj * n, n, n).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(C.topRows(n).cwiseAbs().maxCoeff() <= 1e-13);
  (void)nk;
}

TEST_CASE("contraction of the fixed-point iteration at selected k") {
  PeriodicDDE dde = testing::sec3_problem();
  auto b = compute_bounds(dde);
  const double R = 2.0;
  const int k = select_k(b, R, 1);
  auto ops = make_ops(dde, k, 10);
  const Complex mu(0.99 * R, 0.0);
  const double bound = (b.sup_A + std::abs(mu) * b.sup_B_total) / k;

  GridVector v = GridVector::Ones(ops.nk());
  const Eigen::MatrixXcd M = ops.M0.cast<Complex>() + mu * ops.L.cast<Complex>();
  Eigen::VectorXcd x = ops.S.cast<Complex>() * v;
  const Eigen::VectorXcd sv = x;
  double prev = -1.0, rate = 0.0;
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXcd xn = sv + M * x;
    const double diff = (xn - x).cwiseAbs().maxCoeff();
    if (prev > 1e-300 && diff > 0.0) rate = diff / prev;
    prev = diff;
    x = xn;
    if (diff < 1e-14) break;
  }
  CHECK(rate <= bound + 0.05);
  CHECK(rate < 1.0);
}
