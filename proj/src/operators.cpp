// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include "ddef/operators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddef {

namespace {
constexpr double kTol = 1e-12;

// Scatter a scalar interpolation row (coefficient * x_c(point)) into all
// state components of a dense block row.
void scatter(Eigen::MatrixXd &dst, int row0, const Mesh &mesh, int panel,
             const Eigen::RowVectorXd &irow, const Eigen::MatrixXd &coef) {
  const int n = mesh.n();
  for (int q = 0; q <= mesh.p(); ++q) {
    if (irow[q] == 0.0) continue;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) dst(row0 + r, mesh.dof(panel, q, c)) += irow[q] * coef(r, c);
  }
}
} // namespace

Eigen::MatrixXcd DiscretizedOperators::i_minus_m(Complex mu) const {
  const int N = dofs();
  Eigen::MatrixXcd A = (-M0).cast<Complex>();
  A -= mu * L.cast<Complex>();
  A += Eigen::MatrixXcd::Identity(N, N);
  return A;
}

DiscretizedOperators assemble(const PeriodicDDE &dde, std::shared_ptr<const Mesh> mesh_in) {
  dde.validate();
  if (dde.max_delay() > dde.m + kTol)
    throw std::invalid_argument("assemble: delay exceeds horizon m");

  DiscretizedOperators ops;
  ops.mesh = std::move(mesh_in);
  ops.dde = dde;
  ops.eff_delays = effective_delays(dde);
  ops.bounds = compute_bounds(dde);
  ops.r_max = guaranteed_radius(ops.bounds, ops.mesh->k(), dde.m);

  const Mesh &mesh = *ops.mesh;
  const int n = mesh.n(), p = mesh.p(), k = mesh.k(), m = mesh.m();
  const int N = mesh.dof_count(), nk = mesh.nk();
  const ChebyshevBasis &basis = mesh.basis();

  // integrand sampling matrices: G0 non-mu part, G1 mu part
  Eigen::MatrixXd G0 = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd G1 = Eigen::MatrixXd::Zero(N, N);
  const bool has_drift = !dde.drift.empty();

  for (int j = 0; j < mesh.panel_count(); ++j) {
    const Panel &pan = mesh.panels()[j];
    if (pan.sub < 0) continue; // backshift region handled below
    for (int q = 0; q <= p; ++q) {
      const double s = mesh.node_coord(j, q);
      const int side = (q == 0) ? +1 : (q == p ? -1 : 0);
      const int row0 = mesh.dof(j, q, 0);
      if (has_drift) {
        const Eigen::MatrixXd As = dde.drift.eval(s);
        for (int r = 0; r < n; ++r)
          for (int c = 0; c < n; ++c) G0(row0 + r, mesh.dof(j, q, c)) += As(r, c);
      }
      for (const auto &d : ops.eff_delays) {
        const Eigen::MatrixXd Bs = d.coeff.eval(s);
        double u = s - d.tau;
        // branch decided on the side-perturbed point so each panel's
        // interpolant sees the integrand's one-sided limit
        const bool below = (u < -1.0 - kTol) || (std::abs(u + 1.0) <= kTol && side < 0);
        Eigen::MatrixXd &tgt = below ? G1 : G0;
        if (below) u += 1.0;
        const int src = mesh.locate(u, side);
        const Panel &sp = mesh.panels()[src];
        const double xi =
            std::min(1.0, std::max(-1.0, 2.0 * (u - sp.a) / (sp.b - sp.a) - 1.0));
        scatter(tgt, row0, mesh, src, basis.interp_row(xi), Bs);
      }
    }
  }

  // cumulative integration from the subinterval's left boundary
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < m * k; ++i) {
    const int sub = (k - m * k) + i;
    if (sub < 0) continue;
    const int jf = mesh.sub_panel_first(sub), jl = mesh.sub_panel_last(sub);
    for (int j = jf; j <= jl; ++j) {
      const Panel &pan = mesh.panels()[j];
      const double half = 0.5 * (pan.b - pan.a);
      for (int q = 0; q <= p; ++q) {
        const int row0 = mesh.dof(j, q, 0);
        for (int j2 = jf; j2 < j; ++j2) {
          const double half2 = 0.5 * (mesh.panels()[j2].b - mesh.panels()[j2].a);
          for (int q2 = 0; q2 <= p; ++q2)
            for (int c = 0; c < n; ++c)
              K(row0 + c, mesh.dof(j2, q2, c)) += basis.full_weights()[q2] * half2;
        }
        for (int q2 = 0; q2 <= p; ++q2)
          for (int c = 0; c < n; ++c)
            K(row0 + c, mesh.dof(j, q2, c)) += basis.integration()(q, q2) * half;
      }
    }
  }

  ops.M0 = K * G0;
  ops.L = K * G1;
  // no mu-coupling at all: I - M(mu) is constant in mu and Delta_k is entire
  if (dde.m == 1 && ops.eff_delays.empty())
    ops.r_max = std::numeric_limits<double>::infinity();

  // backshift rows mu x(1+t) for subintervals left of -1
  for (int j = 0; j < mesh.panel_count(); ++j) {
    const Panel &pan = mesh.panels()[j];
    if (pan.sub >= 0) continue;
    for (int q = 0; q <= p; ++q) {
      const double t = mesh.node_coord(j, q);
      const int side = (q == 0) ? +1 : (q == p ? -1 : 0);
      const int src = mesh.locate(1.0 + t, side);
      const Panel &sp = mesh.panels()[src];
      const double xi =
          std::min(1.0, std::max(-1.0, 2.0 * (1.0 + t - sp.a) / (sp.b - sp.a) - 1.0));
      const Eigen::RowVectorXd irow = basis.interp_row(xi);
      const int row0 = mesh.dof(j, q, 0);
      for (int q2 = 0; q2 <= p; ++q2) {
        if (irow[q2] == 0.0) continue;
        for (int c = 0; c < n; ++c) ops.L(row0 + c, mesh.dof(src, q2, c)) += irow[q2];
      }
    }
  }

  // S, Gamma+, Gamma-
  ops.S = Eigen::MatrixXd::Zero(N, nk);
  ops.Gp = Eigen::MatrixXd::Zero(nk, N);
  ops.Gm0 = Eigen::MatrixXd::Zero(nk, N);
  ops.Gm1 = Eigen::MatrixXd::Zero(nk, N);
  for (int i = 0; i < k; ++i) {
    const int jf = mesh.sub_panel_first(i), jl = mesh.sub_panel_last(i);
    for (int j = jf; j <= jl; ++j)
      for (int q = 0; q <= p; ++q)
        for (int c = 0; c < n; ++c) ops.S(mesh.dof(j, q, c), i * n + c) = 1.0;
    for (int c = 0; c < n; ++c) ops.Gp(i * n + c, mesh.dof(jf, 0, c)) = 1.0;
    if (i >= 1) {
      const int jprev = mesh.sub_panel_last(i - 1);
      for (int c = 0; c < n; ++c) ops.Gm0(i * n + c, mesh.dof(jprev, p, c)) = 1.0;
    }
  }
  const int jtop = mesh.sub_panel_last(k - 1);
  for (int c = 0; c < n; ++c) ops.Gm1(c, mesh.dof(jtop, p, c)) = 1.0;

  return ops;
}

PiecewiseFunction apply_S(const DiscretizedOperators &ops, const GridVector &v) {
  if (v.size() != ops.nk()) throw std::invalid_argument("apply_S: bad grid vector size");
  return PiecewiseFunction(ops.mesh, ops.S.cast<Complex>() * v);
}

GridVector gamma_plus(const DiscretizedOperators &ops, const PiecewiseFunction &x) {
  return ops.Gp.cast<Complex>() * x.dofs();
}

GridVector gamma_minus(const DiscretizedOperators &ops, Complex mu, const PiecewiseFunction &x) {
  return (ops.Gm0.cast<Complex>() + mu * ops.Gm1.cast<Complex>()) * x.dofs();
}

double operator_norm_inf(const DiscretizedOperators &ops, double mu_abs) {
  if (mu_abs < 0.0) throw std::invalid_argument("operator_norm_inf: mu_abs must be >= 0");
  return (ops.M0.cwiseAbs() + mu_abs * ops.L.cwiseAbs()).rowwise().sum().maxCoeff();
}

namespace {
bool general_bound_holds(const CoefficientBounds &b, double R, int m, int k) {
  // R^{1/k} < 1 + (R - 0.99R) log R / (V_bar R^{m+1}), evaluated at |mu|=0.99R
  if (b.V_bar <= 0.0) return true;
  const double rhs = 1.0 + (0.01 * R) * std::log(R) / (b.V_bar * std::pow(R, m + 1));
  return std::pow(R, 1.0 / k) < rhs;
}
} // namespace

int select_k(const CoefficientBounds &bounds, double R, int m) {
  if (R < 1.0) throw std::invalid_argument("select_k: R must be >= 1");
  if (m == 1) {
    const double cstar = bounds.sup_A + R * bounds.sup_B_total;
    return static_cast<int>(std::floor(cstar)) + 1; // smallest integer > C*(R)
  }
  if (!(R > 1.0))
    throw std::invalid_argument("select_k: the m >= 2 bound requires R > 1");
  if (bounds.V_bar <= 0.0) return 1;
  for (int k = 1; k <= 1 << 22; ++k)
    if (general_bound_holds(bounds, R, m, k)) return k;
  throw std::invalid_argument("select_k: no feasible k below 2^22; reduce R or V_bar");
}

double guaranteed_radius(const CoefficientBounds &bounds, int k, int m) {
  if (m == 1) {
    // largest R with C*(R) < k
    if (bounds.sup_B_total <= 0.0)
      return (bounds.sup_A < k) ? std::numeric_limits<double>::infinity() : 0.0;
    const double r = (k - bounds.sup_A) / bounds.sup_B_total;
    return std::max(0.0, r);
  }
  if (bounds.V_bar <= 0.0) return std::numeric_limits<double>::infinity();
  double lo = 1.0, hi = 1.0;
  if (!general_bound_holds(bounds, 1.0 + 1e-9, m, k)) return 0.0;
  while (hi < 1e9 && general_bound_holds(bounds, hi * 2.0, m, k)) hi *= 2.0;
  hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (general_bound_holds(bounds, mid, m, k))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

} // namespace ddef
