// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_CHEBYSHEV_HPP
#define DDEF_CHEBYSHEV_HPP

#include <Eigen/Dense>

namespace ddef {

// Degree-p Chebyshev-Lobatto element on [-1,1], nodes in ascending order
// (x_0 = -1, x_p = +1). Provides the dense spectral operators used by the
// assembly: cumulative integration from the left endpoint, differentiation,
// and barycentric interpolation rows.
class ChebyshevBasis {
public:
  explicit ChebyshevBasis(int degree);

  int degree() const { return p_; }
  const Eigen::VectorXd &nodes() const { return nodes_; }

  // Q(r,q) = int_{-1}^{x_r} ell_q(s) ds. Last row carries the Clenshaw-Curtis
  // weights (full-interval integral).
  const Eigen::MatrixXd &integration() const { return integ_; }
  const Eigen::RowVectorXd &full_weights() const { return full_w_; }

  // D(r,q) = ell_q'(x_r).
  const Eigen::MatrixXd &differentiation() const { return diff_; }

  // Barycentric row: f(xi) = row . f(nodes). Exact unit row on node hits.
  Eigen::RowVectorXd interp_row(double xi) const;

private:
  int p_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd bary_;
  Eigen::MatrixXd integ_;
  Eigen::MatrixXd diff_;
  Eigen::RowVectorXd full_w_;
};

} // namespace ddef

#endif
