// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_OPERATORS_HPP
#define DDEF_OPERATORS_HPP

#include <complex>
#include <memory>

#include "ddef/mesh.hpp"

namespace ddef {

using Complex = std::complex<double>;
using GridVector = Eigen::VectorXcd; // (v_0 ... v_{k-1}) in C^{nk}

// Dense discretizations of the four maps on the panel dof space:
//   S       : C^{nk} -> C_k        (piecewise-constant extension, 0 on [-m,-1))
//   Gamma+  : C_k -> C^{nk}        (right limits at t_0..t_{k-1})
//   Gamma-(mu) = Gm0 + mu Gm1     (left limits; first block row mu x(0)-)
//   M_k(mu) = M0 + mu L           (integral operator, backshift rows in L)
// All coefficient matrices are real; mu enters only through the affine pairs.
struct DiscretizedOperators {
  std::shared_ptr<const Mesh> mesh;
  PeriodicDDE dde;                      // the assembled problem
  std::vector<DiscreteDelay> eff_delays; // point delays used in assembly
  CoefficientBounds bounds;
  double r_max = 0.0; // radius with guaranteed invertibility of I - M_k(mu)

  Eigen::MatrixXd S;   // N x nk
  Eigen::MatrixXd Gp;  // nk x N
  Eigen::MatrixXd Gm0; // nk x N
  Eigen::MatrixXd Gm1; // nk x N
  Eigen::MatrixXd M0;  // N x N
  Eigen::MatrixXd L;   // N x N

  int n() const { return mesh->n(); }
  int nk() const { return mesh->nk(); }
  int dofs() const { return mesh->dof_count(); }
  Eigen::MatrixXcd i_minus_m(Complex mu) const;
};

DiscretizedOperators assemble(const PeriodicDDE &dde, std::shared_ptr<const Mesh> mesh);

PiecewiseFunction apply_S(const DiscretizedOperators &ops, const GridVector &v);
GridVector gamma_plus(const DiscretizedOperators &ops, const PiecewiseFunction &x);
GridVector gamma_minus(const DiscretizedOperators &ops, Complex mu, const PiecewiseFunction &x);

// row-sum norm of |M0| + mu_abs |L| (max over |mu| = mu_abs of ||M_k(mu)||_inf)
double operator_norm_inf(const DiscretizedOperators &ops, double mu_abs);

// Smallest k making the shooting fixed point a contraction for |mu| < R:
// m == 1: smallest k > C*(R) = sup_A + R sup_B;
// m >= 2: smallest k with R^{1/k} < 1 + (R - 0.99R) log R / (V_bar R^{m+1}).
int select_k(const CoefficientBounds &bounds, double R, int m);

// Largest radius the bounds guarantee for a given k (inverse of select_k).
double guaranteed_radius(const CoefficientBounds &bounds, int k, int m);

} // namespace ddef

#endif
