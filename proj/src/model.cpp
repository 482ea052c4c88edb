// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include "ddef/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ddef {

namespace {
constexpr double kSafety = 1.01; // sampled sup-norm bounds carry this factor

FourierMatrix kernel_at(const DistributedDelay &term, double theta) {
  FourierMatrix out = term.kernel.at(0);
  double pw = 1.0;
  for (std::size_t d = 1; d < term.kernel.size(); ++d) {
    pw *= theta;
    out.axpy(pw, term.kernel[d]);
  }
  return out;
}
} // namespace

void PeriodicDDE::validate() const {
  if (n < 1) throw std::invalid_argument("PeriodicDDE: n must be >= 1");
  if (m < 1) throw std::invalid_argument("PeriodicDDE: m must be >= 1");
  if (drift.empty() && delays.empty())
    throw std::invalid_argument("PeriodicDDE: need a drift term or at least one delay");
  if (!drift.empty() && (drift.rows() != n || drift.cols() != n))
    throw std::invalid_argument("PeriodicDDE: drift must be n x n");
  for (const auto &term : delays) {
    if (const auto *d = std::get_if<DiscreteDelay>(&term)) {
      if (!(d->tau > 0.0)) throw std::invalid_argument("PeriodicDDE: discrete delay must be > 0");
      if (d->tau > m + 1e-12) throw std::invalid_argument("PeriodicDDE: delay exceeds horizon m");
      if (d->coeff.rows() != n || d->coeff.cols() != n)
        throw std::invalid_argument("PeriodicDDE: delay coefficient must be n x n");
    } else {
      const auto &t = std::get<DistributedDelay>(term);
      if (!(0.0 < t.theta_lo && t.theta_lo < t.theta_hi))
        throw std::invalid_argument("PeriodicDDE: distributed term needs 0 < theta_lo < theta_hi");
      if (t.theta_hi > m + 1e-12)
        throw std::invalid_argument("PeriodicDDE: distributed delay exceeds horizon m");
      if (t.kernel.empty()) throw std::invalid_argument("PeriodicDDE: empty distributed kernel");
      if (t.quadrature_order < 1)
        throw std::invalid_argument("PeriodicDDE: quadrature_order must be >= 1");
      for (const auto &K : t.kernel)
        if (K.rows() != n || K.cols() != n)
          throw std::invalid_argument("PeriodicDDE: kernel coefficient must be n x n");
    }
  }
  if (std::ceil(max_delay() - 1e-12) > m)
    throw std::invalid_argument("PeriodicDDE: m must cover the largest delay");
}

double PeriodicDDE::max_delay() const {
  double md = 0.0;
  for (const auto &term : delays) {
    if (const auto *d = std::get_if<DiscreteDelay>(&term))
      md = std::max(md, d->tau);
    else
      md = std::max(md, std::get<DistributedDelay>(term).theta_hi);
  }
  return md;
}

void gauss_legendre(int order, std::vector<double> &nodes, std::vector<double> &weights) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  for (int i = 0; i < order; ++i) {
    // Newton on P_order from the Chebyshev-based initial guess
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (order == 1) p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (order == 1) ? x : p1;
      const double pm = (order == 1) ? 1.0 : p0;
      pp = order * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[order - 1 - i] = x;
    weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

PeriodicDDE rescale_to_unit_period(const PeriodicDDE &dde, double P) {
  if (!(P > 0.0)) throw std::invalid_argument("rescale_to_unit_period: P must be > 0");
  PeriodicDDE out = dde;
  if (!out.drift.empty()) out.drift.scale(P);
  double md = 0.0;
  for (auto &term : out.delays) {
    if (auto *d = std::get_if<DiscreteDelay>(&term)) {
      d->tau /= P;
      d->coeff.scale(P);
      md = std::max(md, d->tau);
    } else {
      auto &t = std::get<DistributedDelay>(term);
      t.theta_lo /= P;
      t.theta_hi /= P;
      // theta = P theta': K'_d = P^2 P^d K_d
      double fac = P * P;
      for (auto &K : t.kernel) {
        K.scale(fac);
        fac *= P;
      }
      md = std::max(md, t.theta_hi);
    }
  }
  out.m = std::max(1, static_cast<int>(std::ceil(md - 1e-12)));
  return out;
}

CoefficientBounds compute_bounds(const PeriodicDDE &dde, int n_samples) {
  if (n_samples < 64) throw std::invalid_argument("compute_bounds: n_samples must be >= 64");
  const auto eff = effective_delays(dde);
  CoefficientBounds b;
  std::vector<double> term_sup(eff.size(), 0.0);
  double vbar = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const double t = static_cast<double>(s) / n_samples;
    if (!dde.drift.empty()) b.sup_A = std::max(b.sup_A, dde.drift.norm_inf(t));
    double row = 0.0;
    for (std::size_t j = 0; j < eff.size(); ++j) {
      const double nj = eff[j].coeff.norm_inf(t);
      term_sup[j] = std::max(term_sup[j], nj);
      row += nj;
    }
    vbar = std::max(vbar, row);
  }
  b.sup_A *= kSafety;
  for (double v : term_sup) b.sup_B_total += v;
  b.sup_B_total *= kSafety;
  b.V_bar = vbar * kSafety;
  return b;
}

std::vector<DiscreteDelay> discretize_distributed(const DistributedDelay &term) {
  if (!(term.theta_hi > term.theta_lo))
    throw std::invalid_argument("discretize_distributed: empty interval");
  if (term.quadrature_order < 1)
    throw std::invalid_argument("discretize_distributed: quadrature_order must be >= 1");
  std::vector<double> xs, ws;
  gauss_legendre(term.quadrature_order, xs, ws);
  const double half = 0.5 * (term.theta_hi - term.theta_lo);
  const double mid = 0.5 * (term.theta_hi + term.theta_lo);
  std::vector<DiscreteDelay> out;
  out.reserve(xs.size());
  for (std::size_t q = 0; q < xs.size(); ++q) {
    DiscreteDelay d;
    d.tau = mid + half * xs[q];
    d.coeff = kernel_at(term, d.tau);
    d.coeff.scale(ws[q] * half);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<DiscreteDelay> effective_delays(const PeriodicDDE &dde) {
  std::vector<DiscreteDelay> out;
  for (const auto &term : dde.delays) {
    if (const auto *d = std::get_if<DiscreteDelay>(&term)) {
      out.push_back(*d);
    } else {
      auto pts = discretize_distributed(std::get<DistributedDelay>(term));
      out.insert(out.end(), pts.begin(), pts.end());
    }
  }
  return out;
}

} // namespace ddef
