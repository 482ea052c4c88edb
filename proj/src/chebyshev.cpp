// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include "ddef/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

namespace ddef {

namespace {

// Chebyshev coefficients -> values at the ascending Lobatto nodes.
Eigen::MatrixXd cheb_vandermonde(const Eigen::VectorXd &x, int ncoef) {
  const int m = static_cast<int>(x.size());
  Eigen::MatrixXd V(m, ncoef);
  for (int r = 0; r < m; ++r) {
    const double th = std::acos(std::min(1.0, std::max(-1.0, x[r])));
    for (int j = 0; j < ncoef; ++j) V(r, j) = std::cos(j * th);
  }
  return V;
}

} // namespace

ChebyshevBasis::ChebyshevBasis(int degree) : p_(degree) {
  if (degree < 1) throw std::invalid_argument("ChebyshevBasis: degree must be >= 1");
  const int np = p_ + 1;
  nodes_.resize(np);
  for (int q = 0; q < np; ++q) nodes_[q] = -std::cos(q * M_PI / p_);
  nodes_[0] = -1.0;
  nodes_[p_] = 1.0;

  bary_.resize(np);
  for (int q = 0; q < np; ++q) bary_[q] = (q % 2 == 0) ? 1.0 : -1.0;
  bary_[0] *= 0.5;
  bary_[p_] *= 0.5;

  // values -> coefficients by inverting the Vandermonde once (p is small).
  Eigen::MatrixXd V = cheb_vandermonde(nodes_, np);
  Eigen::MatrixXd v2c = V.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(np, np));

  // antiderivative in coefficient space: degree p -> p+1, F(-1) = 0.
  Eigen::MatrixXd anti = Eigen::MatrixXd::Zero(np + 1, np);
  for (int j = 0; j < np; ++j) {
    if (j == 0) {
      anti(1, 0) += 1.0;
    } else if (j == 1) {
      anti(0, 1) += 0.25; // int T1 = T2/4 + const; fold T0 part below
      anti(2, 1) += 0.25;
    } else {
      anti(j + 1, j) += 0.5 / (j + 1);
      anti(j - 1, j) -= 0.5 / (j - 1);
    }
  }
  // fix the T0 coefficient so the antiderivative vanishes at x=-1
  for (int j = 0; j < np; ++j) {
    double at_m1 = 0.0;
    for (int i = 0; i <= np; ++i) at_m1 += anti(i, j) * ((i % 2 == 0) ? 1.0 : -1.0);
    anti(0, j) -= at_m1;
  }
  integ_ = cheb_vandermonde(nodes_, np + 1) * anti * v2c;
  full_w_ = integ_.row(p_);

  // differentiation in coefficient space
  Eigen::MatrixXd der = Eigen::MatrixXd::Zero(np, np);
  for (int j = 1; j < np; ++j) {
    for (int i = j - 1; i >= 0; i -= 2) der(i, j) = (i == 0) ? j : 2.0 * j;
  }
  diff_ = V * der * v2c;
}

Eigen::RowVectorXd ChebyshevBasis::interp_row(double xi) const {
  const int np = p_ + 1;
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(np);
  for (int q = 0; q < np; ++q) {
    if (std::abs(xi - nodes_[q]) < 1e-14) {
      row[q] = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (int q = 0; q < np; ++q) {
    const double w = bary_[q] / (xi - nodes_[q]);
    row[q] = w;
    denom += w;
  }
  row /= denom;
  return row;
}

} // namespace ddef
