// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ddef/oracle.hpp"
#include "ddef/spectrum.hpp"
#include "support.hpp"

using namespace ddef;
using testing::make_ops;

TEST_CASE("count_roots windings") {
  auto ops = make_ops(testing::zero_problem(), 2, 6);
  CHECK(count_roots(ops, Complex(0, 0), 1.5, 32).winding == 1);
  CHECK(count_roots(ops, Complex(0, 0), 0.5, 32).winding == 0);
  auto ops3 = make_ops(testing::sec3_problem(), 2, 14);
  const ContourReport rep = count_roots(ops3, Complex(0, 0), 1.0, 48);
  CHECK(rep.winding == 1);
  CHECK(rep.reliable);
  CHECK(count_roots(ops3, Complex(0, 0), 0.6, 48).winding == 1);
}

TEST_CASE("count_roots refuses circles outside the guaranteed disk") {
  auto ops = make_ops(testing::sec3_problem(), 2, 10); // r_max = 2/1.01
  CHECK_THROWS_AS(count_roots(ops, Complex(0, 0), 0.999 * ops.r_max + 0.1, 16),
                  std::invalid_argument);
}

TEST_CASE("find_multipliers on closed-form problems") {
  SUBCASE("x' = a x, a = ln 2") {
    auto ops = make_ops(testing::ode_problem(std::log(2.0)), 1, 14);
    FindResult res = find_multipliers(ops, 2.5);
    REQUIRE(res.records.size() == 1);
    CHECK(std::abs(res.records[0].lambda - 2.0) <= 1e-10);
    CHECK(res.records[0].alg_mult == 1);
    CHECK(res.records[0].geom_mult == 1);
    CHECK(!res.flagged());
  }
  SUBCASE("x' = x(t-1/2): dominant root against the transcendental reference") {
    auto refs = constant_coefficient_reference(Complex(0, 0), {{Complex(1, 0), 0.5}}, 1);
    REQUIRE(refs.size() == 1);
    const Complex lam_ref = std::exp(refs[0]);
    auto ops = make_ops(testing::sec3_problem(), 2, 16);
    FindResult res = find_multipliers(ops, 1.9);
    REQUIRE(!res.records.empty());
    // dominant = largest |lambda| = smallest |mu| = first record
    CHECK(std::abs(res.records[0].lambda - lam_ref) / std::abs(lam_ref) <= 1e-8);
  }
  SUBCASE("x' = (0.25 + cos 2 pi t) x has lambda = e^{0.25}") {
    auto ops = make_ops(testing::periodic_ode_problem(0.25, 1.0), 2, 16);
    FindResult res = find_multipliers(ops, 2.0);
    REQUIRE(res.records.size() == 1);
    CHECK(std::abs(res.records[0].lambda - std::exp(0.25)) <= 1e-10);
  }
  SUBCASE("x'=0 yields exactly one multiplier, lambda = 1") {
    auto ops = make_ops(testing::zero_problem(), 2, 8);
    FindResult res = find_multipliers(ops, 2.0);
    REQUIRE(res.records.size() == 1);
    CHECK(std::abs(res.records[0].lambda - 1.0) <= 1e-12);
    CHECK(res.records[0].alg_mult == 1);
  }
}

TEST_CASE("winding consistency: sum of multiplicities equals the disk winding") {
  auto ops = make_ops(testing::random_2d_problem(23), 3, 12);
  const double rs = std::min(2.0, 0.99 * ops.r_max);
  FindResult res = find_multipliers(ops, rs);
  int total = 0;
  for (const auto &r : res.records) total += r.alg_mult;
  CHECK(total == res.top.winding);
  CHECK(res.warnings.empty());
}

TEST_CASE("jordan chains") {
  SUBCASE("2-D ODE Jordan block: det root order 2, kernel dim 1, chain length 2") {
    auto ops = make_ops(testing::jordan_problem(0.3), 1, 14);
    const Complex mu_star = std::exp(Complex(-0.3, 0));
    FindResult res = find_multipliers(ops, 1.5);
    REQUIRE(res.records.size() == 1);
    const MultiplierRecord &rec = res.records[0];
    CHECK(std::abs(rec.mu_star - mu_star) <= 1e-9);
    CHECK(rec.alg_mult == 2);
    CHECK(rec.geom_mult == 1);
    REQUIRE(rec.chains.size() == 1);
    CHECK(rec.chains[0].size() == 2);

    // remainder slope: ||Delta(mu)(y0 + (mu - mu*) y1)|| = O((mu-mu*)^2)
    const auto &chain = rec.chains[0];
    double vals[2];
    int idx = 0;
    for (double h : {1e-2, 1e-3}) {
      const Eigen::MatrixXcd D = evaluate(ops, rec.mu_star + h).delta;
      vals[idx++] = (D * (chain[0] + h * chain[1])).norm();
    }
    const double slope = std::log10(vals[0] / vals[1]);
    CHECK(slope >= 1.9);
  }
  SUBCASE("two decoupled copies: geom 2, two chains of length 1") {
    PeriodicDDE dde;
    dde.n = 2;
    dde.m = 1;
    Eigen::MatrixXd A = 0.4 * Eigen::MatrixXd::Identity(2, 2);
    dde.drift = FourierMatrix::constant(A);
    auto ops = make_ops(dde, 1, 12);
    FindResult res = find_multipliers(ops, 2.0);
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].alg_mult == 2);
    CHECK(res.records[0].geom_mult == 2);
    REQUIRE(res.records[0].chains.size() == 2);
    CHECK(res.records[0].chains[0].size() == 1);
    CHECK(res.records[0].chains[1].size() == 1);
  }
  SUBCASE("simple root gives one chain of length 1") {
    auto ops = make_ops(testing::ode_problem(0.5), 1, 10);
    const JordanResult jr = jordan_chains(ops, std::exp(Complex(-0.5, 0)), 1);
    CHECK(jr.geom_mult == 1);
    REQUIRE(jr.chains.size() == 1);
    CHECK(jr.chains[0].size() == 1);
  }
}

TEST_CASE("eigenfunctions") {
  SUBCASE("x' = a x reproduces c e^{a(t+1)}") {
    const double a = std::log(2.0);
    auto ops = make_ops(testing::ode_problem(a), 2, 16);
    FindResult res = find_multipliers(ops, 2.5);
    REQUIRE(res.records.size() == 1);
    REQUIRE(res.records[0].eigenfunctions.size() == 1);
    const PiecewiseFunction &x = res.records[0].eigenfunctions[0];
    const Complex c = x.eval(-1.0)[0];
    double worst = 0.0;
    for (double t = -1.0; t <= 0.0; t += 0.01)
      worst = std::max(worst, std::abs(x.eval(t)[0] - c * std::exp(a * (t + 1.0))));
    CHECK(worst <= 1e-10 * std::abs(c));
    CHECK(res.records[0].residual <= 1e-8);
  }
  SUBCASE("kernel vector reconstructs a continuous eigenfunction (zero gaps)") {
    auto ops = make_ops(testing::sec3_problem(), 3, 16);
    FindResult res = find_multipliers(ops, 1.9);
    REQUIRE(!res.records.empty());
    const PiecewiseFunction &x = res.records[0].eigenfunctions[0];
    CHECK(x.max_jump() <= 1e-8 * x.norm_inf());
  }
  SUBCASE("chain relation holds for the Jordan pair at mu* +- 1e-3") {
    auto ops = make_ops(testing::jordan_problem(0.3), 1, 14);
    FindResult res = find_multipliers(ops, 1.5);
    REQUIRE(res.records.size() == 1);
    const auto &chain = res.records[0].chains[0];
    REQUIRE(chain.size() == 2);
    for (double h : {1e-3, -1e-3}) {
      const Eigen::MatrixXcd D = evaluate(ops, res.records[0].mu_star + h).delta;
      const double rem = (D * (chain[0] + h * chain[1])).norm();
      CHECK(rem <= 10.0 * h * h); // quadratic remainder
    }
  }
}

TEST_CASE("locate_poles") {
  SUBCASE("sec3 k=1: first pole matches the scalar Newton root to 1e-9") {
    const double mu0_ref = pole_reference_single_delay_half();
    CHECK(std::abs(mu0_ref - 1.8535) < 2e-3);
    auto ops = make_ops(testing::sec3_problem(), 1, 16);
    PoleSet ps = locate_poles(ops, 3.0);
    REQUIRE(!ps.poles.empty());
    const Complex mu0 = ps.poles[0].first;
    CHECK(std::abs(mu0.imag()) <= 1e-9);
    CHECK(std::abs(mu0.real() - mu0_ref) <= 1e-9);
  }
  SUBCASE("no delay term means no poles") {
    auto ops = make_ops(testing::ode_problem(0.7), 2, 8);
    CHECK(locate_poles(ops, 100.0).poles.empty());
  }
  SUBCASE("k large enough pushes poles out of |mu| < R (root/pole disjointness)") {
    for (auto &dde : {testing::sec3_problem(), testing::random_2d_problem(31)}) {
      auto b = compute_bounds(dde);
      const int k = select_k(b, 2.0, 1);
      auto ops = make_ops(dde, k, 10);
      CHECK(locate_poles(ops, 2.0).poles.empty());
    }
  }
}

TEST_CASE("k-invariance of multiplier multisets") {
  FindOptions fo;
  fo.with_eigenfunctions = false;
  SUBCASE("sec3, k=3 vs k=6") {
    auto o3 = make_ops(testing::sec3_problem(), 3, 16);
    auto o6 = make_ops(testing::sec3_problem(), 6, 16);
    FindResult r3 = find_multipliers(o3, 2.0, fo);
    FindResult r6 = find_multipliers(o6, 2.0, fo);
    REQUIRE(r3.records.size() == r6.records.size());
    for (std::size_t i = 0; i < r3.records.size(); ++i)
      CHECK(std::abs(r3.records[i].mu_star - r6.records[i].mu_star) <= 1e-8);
  }
}

TEST_CASE("find_multipliers rejects R_search beyond the guarantee") {
  auto ops = make_ops(testing::sec3_problem(), 2, 10);
  CHECK_THROWS_AS(find_multipliers(ops, 0.999 * ops.r_max + 0.05), std::invalid_argument);
}
