// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include "ddef/charmat.hpp"

#include <cmath>

#include "ddef/errors.hpp"

namespace ddef {

namespace {

// Relative pivot collapse threshold for declaring I - M(mu) singular.
constexpr double kPivotTol = 1e-13;

std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXcd>>
factor_inner(const DiscretizedOperators &ops, Complex mu) {
  auto lu = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXcd>>(ops.i_minus_m(mu));
  const auto diag = lu->matrixLU().diagonal();
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double a = std::abs(diag[i]);
    dmin = std::min(dmin, a);
    dmax = std::max(dmax, a);
  }
  if (!(dmin > kPivotTol * std::max(1.0, dmax)))
    throw RegionViolation(std::abs(mu), ops.r_max);
  return lu;
}

} // namespace

Complex logdet_from_lu(const Eigen::PartialPivLU<Eigen::MatrixXcd> &lu) {
  Complex ld(0.0, 0.0);
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) ld += std::log(diag[i]);
  if (lu.permutationP().determinant() < 0) ld += Complex(0.0, M_PI);
  // keep the phase in (-pi, pi]
  double im = std::remainder(ld.imag(), 2.0 * M_PI);
  return Complex(ld.real(), im);
}

CharMatrixEval evaluate(const DiscretizedOperators &ops, Complex mu) {
  CharMatrixEval ev;
  ev.mu = mu;
  ev.solve_cache = factor_inner(ops, mu);
  const Eigen::MatrixXcd X = ev.solve_cache->solve(ops.S.cast<Complex>());
  const Eigen::MatrixXcd Gm = ops.Gm0.cast<Complex>() + mu * ops.Gm1.cast<Complex>();
  ev.delta = Eigen::MatrixXcd::Identity(ops.nk(), ops.nk()) - Gm * X;
  ev.lu = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXcd>>(ev.delta);
  ev.logdet = logdet_from_lu(*ev.lu);
  return ev;
}

DerivativeStack derivatives(const DiscretizedOperators &ops, Complex mu, int jmax) {
  if (jmax < 1) throw std::invalid_argument("derivatives: jmax must be >= 1");
  auto lu = factor_inner(ops, mu);
  const Eigen::MatrixXcd Gm = ops.Gm0.cast<Complex>() + mu * ops.Gm1.cast<Complex>();
  const Eigen::MatrixXcd Lc = ops.L.cast<Complex>();

  DerivativeStack st;
  st.mu = mu;
  Eigen::MatrixXcd Xprev = lu->solve(ops.S.cast<Complex>()); // X_0
  st.d.push_back(Eigen::MatrixXcd::Identity(ops.nk(), ops.nk()) - Gm * Xprev);
  for (int j = 1; j <= jmax; ++j) {
    const Eigen::MatrixXcd Xj = static_cast<double>(j) * lu->solve(Lc * Xprev);
    st.d.push_back(-(Gm * Xj) - static_cast<double>(j) * (ops.Gm1.cast<Complex>() * Xprev));
    Xprev = Xj;
  }
  return st;
}

EquivalenceReport verify_equivalence(const DiscretizedOperators &ops, Complex mu) {
  const Mesh &mesh = *ops.mesh;
  const int N = ops.dofs(), nk = ops.nk(), n = ops.n(), p = mesh.p();

  // injection of the C_{k,0} coordinates: every dof except the left node of
  // the first panel of each subinterval J_i, i >= 0
  std::vector<int> free_dofs;
  free_dofs.reserve(N - nk);
  std::vector<bool> pinned(N, false);
  for (int i = 0; i < mesh.k(); ++i) {
    const int jf = mesh.sub_panel_first(i);
    for (int c = 0; c < n; ++c) pinned[mesh.dof(jf, 0, c)] = true;
  }
  for (int r = 0; r < N; ++r)
    if (!pinned[r]) free_dofs.push_back(r);
  Eigen::MatrixXd Pinj = Eigen::MatrixXd::Zero(N, N - nk);
  for (int cidx = 0; cidx < N - nk; ++cidx) Pinj(free_dofs[cidx], cidx) = 1.0;

  const Eigen::MatrixXcd Ifull = Eigen::MatrixXcd::Identity(N, N);
  const Eigen::MatrixXcd Sc = ops.S.cast<Complex>();
  const Eigen::MatrixXcd Gpc = ops.Gp.cast<Complex>();
  const Eigen::MatrixXcd Gm0c = ops.Gm0.cast<Complex>();
  const Eigen::MatrixXcd Gm = Gm0c + mu * ops.Gm1.cast<Complex>();
  const Eigen::MatrixXcd Pc = Pinj.cast<Complex>();
  const Eigen::MatrixXcd M0c = ops.M0.cast<Complex>();
  const Eigen::MatrixXcd Mmu = M0c + mu * ops.L.cast<Complex>();

  auto inner = factor_inner(ops, mu);

  // E(mu)[v, phi] = (I - M(mu))^{-1} (S v + phi)
  Eigen::MatrixXcd rhs(N, N);
  rhs.leftCols(nk) = Sc;
  rhs.rightCols(N - nk) = Pc;
  const Eigen::MatrixXcd E = inner->solve(rhs);

  // F(mu) = [Gp - Gm(0) + Gm(mu)(I-M(mu))^{-1}(I - S Gp - M(0)); I - S Gp - M(0)]
  const Eigen::MatrixXcd core = Ifull - Sc * Gpc - M0c;
  Eigen::MatrixXcd F(N, N);
  F.topRows(nk) = (Gpc - Gm0c) + Gm * inner->solve(core);
  F.bottomRows(N - nk) = Pc.transpose() * core;

  // G(mu) = I - mu T = [I - S Gm(0) - M(0)]^{-1} [I - S Gm(mu) - M(mu)]
  Eigen::PartialPivLU<Eigen::MatrixXcd> base(Ifull - Sc * Gm0c - M0c);
  const Eigen::MatrixXcd G = base.solve(Ifull - Sc * Gm - Mmu);

  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N, N);
  const Eigen::MatrixXcd X = inner->solve(Sc);
  H.topLeftCorner(nk, nk) = Eigen::MatrixXcd::Identity(nk, nk) - Gm * X;
  H.bottomRightCorner(N - nk, N - nk).setIdentity();

  EquivalenceReport rep;
  rep.mu = mu;
  rep.res_fge_h = (F * G * E - H).norm() / H.norm();

  // inverses per the closed forms
  Eigen::MatrixXcd Einv(N, N);
  Einv.topRows(nk) = Gpc;
  Einv.bottomRows(N - nk) = Pc.transpose() * (Ifull - Sc * Gpc - Mmu);
  rep.res_e_inv = (E * Einv - Ifull).norm();

  Eigen::MatrixXcd finv_rhs(N, N);
  finv_rhs.leftCols(nk) = Sc;
  finv_rhs.rightCols(N - nk) = Pc - Sc * (Gm * inner->solve(Pc));
  const Eigen::MatrixXcd Finv = base.solve(finv_rhs);
  rep.res_f_inv = (F * Finv - Ifull).norm();
  return rep;
}

std::vector<LogdetSample> logdet_grid(const DiscretizedOperators &ops,
                                      const std::vector<Complex> &mus) {
  std::vector<LogdetSample> out;
  out.reserve(mus.size());
  for (Complex mu : mus) {
    LogdetSample s;
    s.mu = mu;
    try {
      s.logdet = evaluate(ops, mu).logdet;
    } catch (const RegionViolation &) {
      s.ok = false;
      s.logdet = Complex(0, 0);
    }
    out.push_back(s);
  }
  return out;
}

} // namespace ddef
