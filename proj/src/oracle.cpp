// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include "ddef/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddef {

MonodromyMatrix discretize_T(const DiscretizedOperators &ops) {
  const int N = ops.dofs();
  const Eigen::MatrixXd base =
      Eigen::MatrixXd::Identity(N, N) - ops.S * ops.Gm0 - ops.M0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(base);
  const double rcond_proxy = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(rcond_proxy > 1e-13 * std::max(1.0, lu.matrixLU().diagonal().cwiseAbs().maxCoeff())))
    throw std::runtime_error("discretize_T: I - S Gamma_-(0) - M(0) is singular (assembly bug)");
  MonodromyMatrix out;
  out.mesh = ops.mesh;
  out.T = lu.solve(ops.S * ops.Gm1 + ops.L);
  return out;
}

std::vector<std::pair<Complex, int>> oracle_multipliers(const MonodromyMatrix &T_hat,
                                                        double min_abs_lambda,
                                                        double cluster_tol) {
  if (!(min_abs_lambda > 0.0))
    throw std::invalid_argument("oracle_multipliers: min_abs_lambda must be > 0");
  Eigen::EigenSolver<Eigen::MatrixXd> es(T_hat.T, /*computeEigenvectors=*/false);
  std::vector<Complex> lams;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex lam = es.eigenvalues()[i];
    if (std::abs(lam) >= min_abs_lambda) lams.push_back(lam);
  }
  std::sort(lams.begin(), lams.end(), [](Complex a, Complex b) {
    if (std::abs(std::abs(a) - std::abs(b)) > 1e-14) return std::abs(a) > std::abs(b);
    return std::arg(a) < std::arg(b);
  });
  std::vector<std::pair<Complex, int>> out;
  std::vector<bool> used(lams.size(), false);
  for (std::size_t i = 0; i < lams.size(); ++i) {
    if (used[i]) continue;
    Complex sum = lams[i];
    int cnt = 1;
    for (std::size_t j = i + 1; j < lams.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(lams[j] - lams[i]) <= cluster_tol * std::max(1.0, std::abs(lams[i]))) {
        sum += lams[j];
        ++cnt;
        used[j] = true;
      }
    }
    out.emplace_back(sum / static_cast<double>(cnt), cnt);
  }
  return out;
}

std::vector<Complex> constant_coefficient_reference(
    Complex a, const std::vector<std::pair<Complex, double>> &terms, int count) {
  auto f = [&](Complex s) {
    Complex v = s - a;
    for (const auto &[b, tau] : terms) v -= b * std::exp(-s * tau);
    return v;
  };
  auto fp = [&](Complex s) {
    Complex v(1.0, 0.0);
    for (const auto &[b, tau] : terms) v += tau * b * std::exp(-s * tau);
    return v;
  };
  std::vector<Complex> roots;
  auto push_unique = [&](Complex s) {
    for (Complex r : roots)
      if (std::abs(r - s) <= 1e-10 * std::max(1.0, std::abs(r))) return;
    roots.push_back(s);
  };
  for (double re = -6.0; re <= 6.01; re += 0.5) {
    for (double im = 0.0; im <= 24.01; im += 0.7) {
      Complex s(re, im);
      bool ok = false;
      for (int it = 0; it < 80; ++it) {
        const Complex d = f(s) / fp(s);
        if (!std::isfinite(std::abs(d))) break;
        s -= d;
        if (std::abs(d) < 1e-13 * std::max(1.0, std::abs(s))) {
          ok = true;
          break;
        }
      }
      if (ok && std::abs(f(s)) < 1e-12 * std::max(1.0, std::abs(s))) {
        push_unique(s);
        if (std::abs(s.imag()) > 1e-12) push_unique(std::conj(s));
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    if (std::abs(x.real() - y.real()) > 1e-12) return x.real() > y.real();
    return x.imag() < y.imag();
  });
  if (static_cast<int>(roots.size()) > count) roots.resize(count);
  return roots;
}

double pole_reference_single_delay_half() {
  // f(mu) = 1 - sqrt(mu) sinh(sqrt(mu)/2), real root near 1.85
  double mu = 1.85;
  for (int it = 0; it < 100; ++it) {
    const double r = std::sqrt(mu);
    const double f = 1.0 - r * std::sinh(0.5 * r);
    const double df = -(std::sinh(0.5 * r) / (2.0 * r) + 0.25 * std::cosh(0.5 * r));
    const double step = f / df;
    mu -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return mu;
}

} // namespace ddef
