// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include "ddef/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ddef {

namespace {
constexpr double kTol = 1e-12;
}

Mesh::Mesh(const PeriodicDDE &dde, int k, int p, int max_panels_per_period)
    : k_(k), m_(dde.m), p_(p), n_(dde.n), basis_(p) {
  if (k < 1) throw std::invalid_argument("Mesh: k must be >= 1");
  if (p < 2) throw std::invalid_argument("Mesh: p must be >= 2");

  boundaries_.clear();
  for (int i = k_ - m_ * k_; i <= k_; ++i) boundaries_.push_back(-1.0 + static_cast<double>(i) / k_);

  // Breakpoint closure: shooting boundaries plus images under b -> b + tau,
  // b -> b + tau - 1 and b -> b - 1, restricted to (-m, 0). Only discrete
  // delays seed the closure; distributed-quadrature points are left out.
  std::vector<double> taus;
  for (const auto &term : dde.delays)
    if (const auto *d = std::get_if<DiscreteDelay>(&term)) taus.push_back(d->tau);

  std::vector<double> pts(boundaries_.begin(), boundaries_.end());
  auto known = [&](double c) {
    for (double e : pts)
      if (std::abs(c - e) < kTol) return true;
    return false;
  };
  const std::size_t cap = static_cast<std::size_t>(max_panels_per_period) * m_ + 1;
  for (int pass = 0; pass < 32; ++pass) {
    std::vector<double> fresh;
    const std::size_t upto = pts.size();
    for (std::size_t idx = 0; idx < upto; ++idx) {
      const double b = pts[idx];
      std::vector<double> cand = {b - 1.0};
      for (double tau : taus) {
        cand.push_back(b + tau);
        cand.push_back(b + tau - 1.0);
      }
      for (double c : cand) {
        if (c <= -m_ + kTol || c >= -kTol) continue;
        if (!known(c)) {
          pts.push_back(c);
          fresh.push_back(c);
        }
      }
      if (pts.size() > cap) break;
    }
    if (fresh.empty()) break;
    if (pts.size() > cap) {
      truncated_ = true;
      break;
    }
  }
  std::sort(pts.begin(), pts.end());

  panels_.clear();
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    if (pts[j + 1] - pts[j] < kTol) continue;
    Panel pan;
    pan.a = pts[j];
    pan.b = pts[j + 1];
    const double mid = 0.5 * (pan.a + pan.b);
    pan.sub = static_cast<int>(std::floor((mid + 1.0) * k_ + kTol));
    panels_.push_back(pan);
  }

  const int nsub = m_ * k_;
  sub_first_.assign(nsub, -1);
  sub_last_.assign(nsub, -1);
  for (int j = 0; j < panel_count(); ++j) {
    const int g = panels_[j].sub - (k_ - m_ * k_);
    if (g < 0 || g >= nsub) throw std::logic_error("Mesh: panel outside subinterval range");
    if (sub_first_[g] < 0) sub_first_[g] = j;
    sub_last_[g] = j;
  }
}

double Mesh::node_coord(int panel, int node) const {
  const Panel &pan = panels_[panel];
  return pan.a + 0.5 * (pan.b - pan.a) * (basis_.nodes()[node] + 1.0);
}

int Mesh::locate(double u, int side) const {
  const int np = panel_count();
  if (u <= panels_.front().a + kTol)
    return (side < 0 && u < panels_.front().a + kTol) ? 0 : 0;
  for (int j = 0; j < np; ++j) {
    const Panel &pan = panels_[j];
    if (std::abs(u - pan.a) < kTol) return (side < 0 && j > 0) ? j - 1 : j;
    if (pan.a < u && u < pan.b - kTol) return j;
  }
  return np - 1; // u at/above 0: left-sided value of the last panel
}

std::shared_ptr<const Mesh> build_mesh(const PeriodicDDE &dde, int k, int p) {
  dde.validate();
  return std::make_shared<Mesh>(dde, k, p);
}

PiecewiseFunction::PiecewiseFunction(std::shared_ptr<const Mesh> mesh, Eigen::VectorXcd dofs)
    : mesh_(std::move(mesh)), dofs_(std::move(dofs)) {
  if (dofs_.size() != mesh_->dof_count())
    throw std::invalid_argument("PiecewiseFunction: dof size mismatch");
}

Eigen::VectorXcd PiecewiseFunction::eval_side(double t, int side) const {
  const Mesh &mesh = *mesh_;
  const int j = mesh.locate(t, side);
  const Panel &pan = mesh.panels()[j];
  const double xi = std::min(1.0, std::max(-1.0, 2.0 * (t - pan.a) / (pan.b - pan.a) - 1.0));
  const Eigen::RowVectorXd row = mesh.basis().interp_row(xi);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(mesh.n());
  for (int q = 0; q <= mesh.p(); ++q)
    for (int c = 0; c < mesh.n(); ++c) out[c] += row[q] * dofs_[mesh.dof(j, q, c)];
  return out;
}

double PiecewiseFunction::norm_inf() const {
  return dofs_.size() ? dofs_.cwiseAbs().maxCoeff() : 0.0;
}

double PiecewiseFunction::weighted_norm(double R) const {
  if (!(R > 0.0)) throw std::invalid_argument("weighted_norm: R must be > 0");
  const Mesh &mesh = *mesh_;
  double best = 0.0;
  for (int j = 0; j < mesh.panel_count(); ++j)
    for (int q = 0; q <= mesh.p(); ++q) {
      const double w = std::pow(R, mesh.node_coord(j, q));
      double a = 0.0;
      for (int c = 0; c < mesh.n(); ++c) a = std::max(a, std::abs(dofs_[mesh.dof(j, q, c)]));
      best = std::max(best, w * a);
    }
  return best;
}

double PiecewiseFunction::max_jump() const {
  const Mesh &mesh = *mesh_;
  double best = 0.0;
  for (int j = 1; j < mesh.panel_count(); ++j) {
    for (int c = 0; c < mesh.n(); ++c) {
      const auto left = dofs_[mesh.dof(j - 1, mesh.p(), c)];
      const auto right = dofs_[mesh.dof(j, 0, c)];
      best = std::max(best, std::abs(left - right));
    }
  }
  return best;
}

} // namespace ddef
