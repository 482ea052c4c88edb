// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_TESTS_SUPPORT_HPP
#define DDEF_TESTS_SUPPORT_HPP

#include <random>

#include "ddef/operators.hpp"

namespace ddef::testing {

// x'(t) = x(t - 1/2), the scalar counterexample problem
inline PeriodicDDE sec3_problem() {
  PeriodicDDE dde;
  dde.n = 1;
  dde.m = 1;
  DiscreteDelay d;
  d.tau = 0.5;
  d.coeff = FourierMatrix::constant(Eigen::MatrixXd::Ones(1, 1));
  dde.delays.emplace_back(std::move(d));
  return dde;
}

// x'(t) = 0 (represented as a zero drift matrix)
inline PeriodicDDE zero_problem() {
  PeriodicDDE dde;
  dde.n = 1;
  dde.m = 1;
  dde.drift = FourierMatrix::constant(Eigen::MatrixXd::Zero(1, 1));
  return dde;
}

// x'(t) = a x(t)
inline PeriodicDDE ode_problem(double a) {
  PeriodicDDE dde;
  dde.n = 1;
  dde.m = 1;
  dde.drift = FourierMatrix::constant(a * Eigen::MatrixXd::Ones(1, 1));
  return dde;
}

// x'(t) = (a + b cos 2 pi t) x(t)
inline PeriodicDDE periodic_ode_problem(double a, double b) {
  PeriodicDDE dde;
  dde.n = 1;
  dde.m = 1;
  dde.drift = FourierMatrix(1, 1);
  dde.drift.entry(0, 0).a0 = a;
  dde.drift.entry(0, 0).cs = {b};
  return dde;
}

// 2-D ODE Jordan block x' = [[a,0],[1,a]] x
inline PeriodicDDE jordan_problem(double a) {
  PeriodicDDE dde;
  dde.n = 2;
  dde.m = 1;
  Eigen::MatrixXd A(2, 2);
  A << a, 0.0, 1.0, a;
  dde.drift = FourierMatrix::constant(A);
  return dde;
}

// scalar x'(t) = b x(t-1): delay equal to the period
inline PeriodicDDE delay_equals_period_problem(double b) {
  PeriodicDDE dde;
  dde.n = 1;
  dde.m = 1;
  DiscreteDelay d;
  d.tau = 1.0;
  d.coeff = FourierMatrix::constant(b * Eigen::MatrixXd::Ones(1, 1));
  dde.delays.emplace_back(std::move(d));
  return dde;
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  // fixed 53-bit mapping, stable across standard libraries
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline FourierMatrix random_fourier(std::mt19937_64 &rng, int n, double scale, int harmonics = 1) {
  FourierMatrix f(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto &e = f.entry(i, j);
      e.a0 = uniform(rng, -scale, scale);
      for (int h = 0; h < harmonics; ++h) {
        e.cs.push_back(uniform(rng, -scale, scale));
        e.sn.push_back(uniform(rng, -scale, scale));
      }
    }
  return f;
}

// seeded 2-D problem with one delay 0.5, m = 1
inline PeriodicDDE random_2d_problem(unsigned long seed, double scale = 0.3) {
  std::mt19937_64 rng(seed);
  PeriodicDDE dde;
  dde.n = 2;
  dde.m = 1;
  dde.drift = random_fourier(rng, 2, scale);
  DiscreteDelay d;
  d.tau = 0.5;
  d.coeff = random_fourier(rng, 2, scale);
  dde.delays.emplace_back(std::move(d));
  return dde;
}

// seeded 2-D problem with delays {0.5, 1.5}, m = 2, zero drift, small
// coefficients so the weighted-norm bound keeps k at desk scale
inline PeriodicDDE random_2d_m2_problem(unsigned long seed, double scale = 0.005) {
  std::mt19937_64 rng(seed);
  PeriodicDDE dde;
  dde.n = 2;
  dde.m = 2;
  for (double tau : {0.5, 1.5}) {
    DiscreteDelay d;
    d.tau = tau;
    d.coeff = random_fourier(rng, 2, scale);
    dde.delays.emplace_back(std::move(d));
  }
  return dde;
}

inline DiscretizedOperators make_ops(const PeriodicDDE &dde, int k, int p) {
  return assemble(dde, build_mesh(dde, k, p));
}

} // namespace ddef::testing

#endif
