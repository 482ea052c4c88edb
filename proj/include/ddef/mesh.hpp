// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_MESH_HPP
#define DDEF_MESH_HPP

#include <complex>
#include <memory>
#include <vector>

#include "ddef/chebyshev.hpp"
#include "ddef/model.hpp"

namespace ddef {

// One polynomial panel [a,b]; `sub` is the index i of the owning shooting
// subinterval J_i = [-1+i/k, -1+(i+1)/k), i = k-mk ... k-1.
struct Panel {
  double a = 0.0;
  double b = 0.0;
  int sub = 0;
};

// Shooting mesh on [-m, 0]: k subintervals per unit period, each subdivided
// into panels at the closure of discrete-delay shift images so that shooting
// solutions are analytic per panel. Degree-p Chebyshev-Lobatto nodes per
// panel; the value stored at a panel's left node is the right-sided limit.
class Mesh {
public:
  Mesh(const PeriodicDDE &dde, int k, int p, int max_panels_per_period = 64);

  int k() const { return k_; }
  int m() const { return m_; }
  int p() const { return p_; }
  int n() const { return n_; }
  int nk() const { return n_ * k_; }
  int panel_count() const { return static_cast<int>(panels_.size()); }
  int dof_count() const { return panel_count() * (p_ + 1) * n_; }
  bool closure_truncated() const { return truncated_; }

  const std::vector<Panel> &panels() const { return panels_; }
  const ChebyshevBasis &basis() const { return basis_; }
  const std::vector<double> &boundaries() const { return boundaries_; } // t_{k-mk}..t_k

  // panels of subinterval i (i = k-mk .. k-1), contiguous range [first, last]
  int sub_panel_first(int i) const { return sub_first_[i - (k_ - m_ * k_)]; }
  int sub_panel_last(int i) const { return sub_last_[i - (k_ - m_ * k_)]; }

  int dof(int panel, int node, int comp = 0) const {
    return (panel * (p_ + 1) + node) * n_ + comp;
  }
  double node_coord(int panel, int node) const;

  // Panel containing u; side > 0 approaches from above, side < 0 from below,
  // side == 0 is the right-continuous convention. u near 0 resolves to the
  // last panel (left-sided value).
  int locate(double u, int side = 0) const;

private:
  int k_, m_, p_, n_;
  bool truncated_ = false;
  std::vector<double> boundaries_;
  std::vector<Panel> panels_;
  std::vector<int> sub_first_, sub_last_;
  ChebyshevBasis basis_;
};

std::shared_ptr<const Mesh> build_mesh(const PeriodicDDE &dde, int k, int p);

// Element of C_k: complex values at every panel node.
class PiecewiseFunction {
public:
  PiecewiseFunction() = default;
  PiecewiseFunction(std::shared_ptr<const Mesh> mesh, Eigen::VectorXcd dofs);

  const std::shared_ptr<const Mesh> &mesh() const { return mesh_; }
  const Eigen::VectorXcd &dofs() const { return dofs_; }
  Eigen::VectorXcd &dofs() { return dofs_; }

  // x(t)+ / x(t)- evaluation of the owning panel's polynomial
  Eigen::VectorXcd eval(double t) const { return eval_side(t, 0); }
  Eigen::VectorXcd eval_left(double t) const { return eval_side(t, -1); }
  Eigen::VectorXcd eval_side(double t, int side) const;

  double norm_inf() const;
  double weighted_norm(double R) const; // max over nodes of R^t |x(t)|_inf
  // largest |x(b)- - x(b)+| over interior panel boundaries b
  double max_jump() const;

private:
  std::shared_ptr<const Mesh> mesh_;
  Eigen::VectorXcd dofs_;
};

} // namespace ddef

#endif
