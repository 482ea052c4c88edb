// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include "ddef/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ddef/errors.hpp"

namespace ddef {

namespace {

struct TraceEval {
  Complex F;  // tr(Delta^{-1} Delta')
  Complex dF; // derivative of the trace
};

Complex trace_logderiv(const DiscretizedOperators &ops, Complex mu) {
  const DerivativeStack st = derivatives(ops, mu, 1);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(st.d[0]);
  return lu.solve(st.d[1]).trace();
}

TraceEval trace_logderiv2(const DiscretizedOperators &ops, Complex mu) {
  const DerivativeStack st = derivatives(ops, mu, 2);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(st.d[0]);
  const Eigen::MatrixXcd Y1 = lu.solve(st.d[1]);
  const Eigen::MatrixXcd Y2 = lu.solve(st.d[2]);
  TraceEval te;
  te.F = Y1.trace();
  te.dF = Y2.trace() - (Y1 * Y1).trace();
  return te;
}

double cap_radius(const DiscretizedOperators &ops) {
  return std::isfinite(ops.r_max) ? 0.995 * ops.r_max
                                  : std::numeric_limits<double>::infinity();
}

// A root close to the contour stalls the trapezoid quadrature. Growing the
// radius moves the contour off the root while keeping the count a superset of
// the requested disk, so a zero count stays conclusive.
ContourReport reliable_count(const DiscretizedOperators &ops, Complex c, double r,
                             const FindOptions &opts, double cap, bool allow_grow = true) {
  ContourReport rep;
  bool first = true;
  for (double factor : {1.0, 1.07, 1.16, 1.23}) {
    const double rr = r * factor;
    if (factor > 1.0 && (!allow_grow || (std::isfinite(cap) && std::abs(c) + rr > cap)))
      continue;
    int samples = opts.samples;
    while (true) {
      ContourReport attempt = count_roots(ops, c, rr, samples);
      if (first || attempt.reliable) {
        rep = attempt;
        first = false;
      }
      if (attempt.reliable) return rep;
      if (samples >= opts.max_samples) break;
      samples *= 2;
    }
  }
  return rep;
}

struct NewtonOutcome {
  Complex mu;
  bool converged = false;
  int iters = 0;
};

// Newton on g(mu) = 1/tr(Delta^{-1} Delta'); g has a simple root at a root of
// det Delta of any multiplicity, so the step is mu + F/F'.
NewtonOutcome newton_root(const DiscretizedOperators &ops, Complex start, double cap,
                          const FindOptions &opts) {
  NewtonOutcome out;
  out.mu = start;
  for (int it = 0; it < opts.newton_max_iter; ++it) {
    out.iters = it + 1;
    TraceEval te;
    try {
      te = trace_logderiv2(ops, out.mu);
    } catch (const RegionViolation &) {
      return out; // stepped onto a pole; caller subdivides
    }
    if (!std::isfinite(std::abs(te.F)) || !std::isfinite(std::abs(te.dF)) ||
        te.F == Complex(0, 0) || te.dF == Complex(0, 0))
      return out; // sat exactly on a root/pole; caller retries from elsewhere
    const Complex step = te.F / te.dF;
    out.mu += step;
    if (std::abs(out.mu) > cap) return out;
    if (std::abs(step) <= opts.newton_tol * std::max(1.0, std::abs(out.mu))) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

void resolve_cluster(const DiscretizedOperators &ops, Complex c, double r, int depth,
                     const FindOptions &opts, double cap,
                     std::vector<MultiplierRecord> &records,
                     std::vector<std::string> &warnings);

void process_disk(const DiscretizedOperators &ops, Complex c, double r, int depth,
                  const FindOptions &opts, double cap,
                  std::vector<MultiplierRecord> &records,
                  std::vector<std::string> &warnings) {
  ContourReport rep = reliable_count(ops, c, r, opts, cap);
  if (!rep.reliable) {
    warnings.push_back("unreliable winding on disk at |c|=" + std::to_string(std::abs(c)) +
                       " r=" + std::to_string(r));
  }
  if (rep.winding == 0) {
    if (rep.reliable) return; // count covers disk(c, r) or more
    if (r <= opts.cluster_radius || depth >= opts.max_depth) return; // warned above
  } else {
    // try to resolve the whole disk as one cluster first
    const NewtonOutcome nw = newton_root(ops, c, cap, opts);
    if (nw.converged && std::abs(nw.mu - c) <= 1.10 * r) {
      try {
        const double mr =
            std::max(1e-9, std::min(opts.cluster_radius, 0.5 * (cap - std::abs(nw.mu))));
        ContourReport tiny = count_roots(ops, nw.mu, mr, 2 * opts.samples);
        if (tiny.reliable && tiny.winding >= 1 && tiny.winding == rep.winding) {
          MultiplierRecord rec;
          rec.mu_star = nw.mu;
          rec.alg_mult = tiny.winding;
          records.push_back(std::move(rec));
          return;
        }
      } catch (const std::exception &) {
        // fall through to subdivision
      }
    }
    if (r <= opts.cluster_radius || depth >= opts.max_depth) {
      resolve_cluster(ops, c, r, depth, opts, cap, records, warnings);
      return;
    }
  }
  // subdivide: center child + hex ring, clamped inside the analyticity cap
  const double rc = 0.58 * r;
  std::vector<Complex> centers = {c};
  for (int j = 0; j < 6; ++j) {
    const double ang = (2.0 * M_PI * j) / 6.0 + 0.3;
    centers.push_back(c + Complex(0.65 * r * std::cos(ang), 0.65 * r * std::sin(ang)));
  }
  for (Complex cc : centers) {
    double rr = rc;
    if (std::isfinite(cap) && std::abs(cc) + rr > cap) {
      rr = cap - std::abs(cc);
      if (rr < 0.02 * r) continue;
    }
    process_disk(ops, cc, rr, depth + 1, opts, cap, records, warnings);
  }
}

void resolve_cluster(const DiscretizedOperators &ops, Complex c, double r, int depth,
                     const FindOptions &opts, double cap,
                     std::vector<MultiplierRecord> &records,
                     std::vector<std::string> &warnings) {
  const NewtonOutcome nw = newton_root(ops, c, cap, opts);
  if (!nw.converged) {
    if (depth < opts.max_depth) {
      // bisect the stubborn sub-disk once more
      for (Complex cc : {c - Complex(0.5 * r, 0), c + Complex(0.5 * r, 0)}) {
        double rr = 0.62 * r;
        if (std::isfinite(cap) && std::abs(cc) + rr > cap) rr = cap - std::abs(cc);
        if (rr > 0.0) process_disk(ops, cc, rr, depth + 1, opts, cap, records, warnings);
      }
      return;
    }
    MultiplierRecord rec;
    rec.mu_star = nw.mu;
    rec.warnings.push_back("newton did not converge in " +
                           std::to_string(opts.newton_max_iter) + " steps");
    records.push_back(std::move(rec));
    return;
  }
  MultiplierRecord rec;
  rec.mu_star = nw.mu;
  try {
    const double mr =
        std::max(1e-9, std::min(opts.cluster_radius, 0.5 * (cap - std::abs(nw.mu))));
    ContourReport tiny = count_roots(ops, nw.mu, mr, 2 * opts.samples);
    rec.alg_mult = std::max(1, tiny.winding);
    if (!tiny.reliable) rec.warnings.push_back("unreliable multiplicity winding");
  } catch (const std::exception &) {
    rec.alg_mult = 1;
    rec.warnings.push_back("multiplicity winding unavailable at the domain edge");
  }
  records.push_back(std::move(rec));
}

} // namespace

bool FindResult::flagged() const {
  if (!warnings.empty()) return true;
  for (const auto &r : records)
    if (r.flagged()) return true;
  return false;
}

ContourReport count_roots(const DiscretizedOperators &ops, Complex center, double radius,
                          int samples) {
  if (radius <= 0.0) throw std::invalid_argument("count_roots: radius must be > 0");
  if (samples < 8) samples = 8;
  const double cap = 0.99 * ops.r_max;
  if (std::isfinite(ops.r_max) && std::abs(center) + radius > cap * (1.0 + 1e-9))
    throw std::invalid_argument("count_roots: circle leaves the guaranteed disk |mu| < 0.99 R");

  Complex acc(0, 0);
  for (int j = 0; j < samples; ++j) {
    const double th = 2.0 * M_PI * j / samples;
    const Complex z = center + radius * Complex(std::cos(th), std::sin(th));
    acc += trace_logderiv(ops, z) * (z - center);
  }
  acc /= static_cast<double>(samples);

  ContourReport rep;
  rep.center = center;
  rep.radius = radius;
  rep.samples = samples;
  if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag())) {
    rep.winding = 0;
    rep.residual = std::numeric_limits<double>::infinity();
    rep.reliable = false; // a sample sat on a root; caller changes samples
    return rep;
  }
  rep.winding = static_cast<int>(std::lround(acc.real()));
  rep.residual = std::abs(acc - Complex(rep.winding, 0));
  rep.reliable = rep.residual < 0.25;
  return rep;
}

FindResult find_multipliers(const DiscretizedOperators &ops, double R_search,
                            const FindOptions &opts) {
  if (!(R_search > 0.0)) throw std::invalid_argument("find_multipliers: R_search must be > 0");
  if (std::isfinite(ops.r_max) && R_search > 0.99 * ops.r_max * (1.0 + 1e-9))
    throw std::invalid_argument(
        "find_multipliers: R_search exceeds 0.99 x guaranteed radius " +
        std::to_string(ops.r_max) + "; raise k");

  FindResult res;
  const double cap = cap_radius(ops);
  res.top = reliable_count(ops, Complex(0, 0), R_search, opts, cap, /*allow_grow=*/false);
  if (!res.top.reliable)
    res.warnings.push_back("top-level winding unreliable (residual " +
                           std::to_string(res.top.residual) + ")");
  std::vector<MultiplierRecord> raw;
  process_disk(ops, Complex(0, 0), R_search, 0, opts, cap, raw, res.warnings);

  // dedupe overlapping-disk rediscoveries
  std::vector<MultiplierRecord> uniq;
  for (auto &r : raw) {
    bool dup = false;
    for (auto &u : uniq)
      if (std::abs(r.mu_star - u.mu_star) <= opts.dedupe_tol * std::max(1.0, std::abs(u.mu_star))) {
        dup = true;
        for (auto &w : r.warnings) u.warnings.push_back(w);
        break;
      }
    if (!dup) uniq.push_back(std::move(r));
  }
  // drop converged roots outside the search radius (children bulge slightly)
  uniq.erase(std::remove_if(uniq.begin(), uniq.end(),
                            [&](const MultiplierRecord &r) {
                              return std::abs(r.mu_star) > R_search * (1.0 + 1e-9);
                            }),
             uniq.end());

  int total_alg = 0;
  for (auto &rec : uniq) {
    rec.lambda = (rec.mu_star != Complex(0, 0)) ? 1.0 / rec.mu_star : Complex(0, 0);
    JordanResult jr = jordan_chains(ops, rec.mu_star, rec.alg_mult);
    rec.geom_mult = jr.geom_mult;
    rec.chains = std::move(jr.chains);
    for (auto &w : jr.warnings) rec.warnings.push_back(w);
    if (opts.with_eigenfunctions) eigenfunctions(ops, rec);
    total_alg += rec.alg_mult;
  }
  if (res.top.reliable && total_alg != res.top.winding)
    res.warnings.push_back("sum of multiplicities " + std::to_string(total_alg) +
                           " does not match disk winding " + std::to_string(res.top.winding));

  std::sort(uniq.begin(), uniq.end(), [](const MultiplierRecord &a, const MultiplierRecord &b) {
    const double ma = std::abs(a.mu_star), mb = std::abs(b.mu_star);
    if (std::abs(ma - mb) > 1e-14) return ma < mb;
    return std::arg(a.mu_star) < std::arg(b.mu_star);
  });
  res.records = std::move(uniq);
  return res;
}

JordanResult jordan_chains(const DiscretizedOperators &ops, Complex mu_star, int alg_mult) {
  if (alg_mult < 1) throw std::invalid_argument("jordan_chains: alg_mult must be >= 1");
  JordanResult out;
  const DerivativeStack st = derivatives(ops, mu_star, std::max(1, alg_mult));

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(st.d[0], Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto &sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  const double thresh = 1e-8 * std::max(smax, 1e-300);
  int geom = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] < thresh) ++geom;
  if (geom == 0) {
    out.warnings.push_back("no singular value below threshold at claimed root; using smallest");
    geom = 1;
  }
  geom = std::min(geom, alg_mult);
  out.geom_mult = geom;

  // minimal-norm least-squares through the same SVD (kernel-orthogonal)
  auto ls_solve = [&](const Eigen::VectorXcd &rhs) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(rhs.size());
    const auto &U = svd.matrixU();
    const auto &V = svd.matrixV();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv[i] < thresh) continue;
      y += (U.col(i).dot(rhs) / sv[i]) * V.col(i);
    }
    return y;
  };

  const int nk = ops.nk();
  int budget = alg_mult;
  for (int c = 0; c < geom; ++c) {
    std::vector<Eigen::VectorXcd> chain;
    chain.push_back(svd.matrixV().col(nk - 1 - c));
    --budget;
    const double scale = 1.0; // kernel vectors are unit norm
    while (budget > 0) {
      // next block row: Delta^(0) y_j = -sum_{i=1..j} Delta^(i)/i! y_{j-i}
      const int j = static_cast<int>(chain.size());
      if (j >= static_cast<int>(st.d.size())) break;
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(nk);
      double fact = 1.0;
      for (int i = 1; i <= j; ++i) {
        fact *= i;
        rhs -= st.d[i] * chain[j - i] / fact;
      }
      const Eigen::VectorXcd yj = ls_solve(rhs);
      const double resid = (st.d[0] * yj - rhs).norm();
      if (resid >= 1e-8 * scale) break;
      chain.push_back(yj);
      --budget;
    }
    out.chains.push_back(std::move(chain));
  }
  int total = 0;
  for (const auto &ch : out.chains) total += static_cast<int>(ch.size());
  if (total != alg_mult)
    out.warnings.push_back("chain lengths sum to " + std::to_string(total) +
                           " but algebraic multiplicity is " + std::to_string(alg_mult));
  return out;
}

void eigenfunctions(const DiscretizedOperators &ops, MultiplierRecord &record) {
  record.eigenfunctions.clear();
  if (record.chains.empty()) {
    JordanResult jr = jordan_chains(ops, record.mu_star, record.alg_mult);
    record.geom_mult = jr.geom_mult;
    record.chains = std::move(jr.chains);
    for (auto &w : jr.warnings) record.warnings.push_back(w);
  }
  const Complex mu = record.mu_star;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ops.i_minus_m(mu));
  const Eigen::MatrixXcd Lc = ops.L.cast<Complex>();
  const Eigen::MatrixXcd Sc = ops.S.cast<Complex>();

  double worst = 0.0;
  for (const auto &chain : record.chains) {
    const int len = static_cast<int>(chain.size());
    // E_i[y] = (N L)^i N S y, evaluated incrementally per chain vector
    std::vector<std::vector<Eigen::VectorXcd>> Eterms(len);
    for (int v = 0; v < len; ++v) {
      Eigen::VectorXcd cur = lu.solve(Sc * chain[v]);
      Eterms[v].push_back(cur);
      for (int i = 1; i < len - v; ++i) {
        cur = lu.solve(Lc * cur);
        Eterms[v].push_back(cur);
      }
    }
    for (int j = 0; j < len; ++j) {
      Eigen::VectorXcd x = Eigen::VectorXcd::Zero(ops.dofs());
      for (int i = 0; i <= j; ++i) x += Eterms[j - i][i];
      PiecewiseFunction pf(ops.mesh, std::move(x));
      if (j == 0) {
        const double nrm = std::max(pf.norm_inf(), 1e-300);
        const double jump = pf.max_jump() / nrm;
        const double resid = [&] {
          // DDE residual of the reconstructed eigenfunction on a refined grid
          const Mesh &mesh = *ops.mesh;
          const ChebyshevBasis &basis = mesh.basis();
          double worst_r = 0.0;
          for (int pj = 0; pj < mesh.panel_count(); ++pj) {
            const Panel &pan = mesh.panels()[pj];
            Eigen::MatrixXcd nodevals(mesh.p() + 1, mesh.n());
            for (int q = 0; q <= mesh.p(); ++q)
              for (int cc = 0; cc < mesh.n(); ++cc)
                nodevals(q, cc) = pf.dofs()[mesh.dof(pj, q, cc)];
            const Eigen::MatrixXcd dvals =
                (2.0 / (pan.b - pan.a)) * (basis.differentiation() * nodevals);
            for (int sgrid = 1; sgrid <= 10; ++sgrid) {
              const double t = pan.a + (pan.b - pan.a) * (sgrid - 0.5) / 10.0;
              const double xi = 2.0 * (t - pan.a) / (pan.b - pan.a) - 1.0;
              const Eigen::RowVectorXd ir = basis.interp_row(xi);
              if (t > -1.0) {
                Eigen::VectorXcd xd = Eigen::VectorXcd::Zero(mesh.n());
                for (int q = 0; q <= mesh.p(); ++q) xd += ir[q] * dvals.row(q).transpose();
                Eigen::VectorXcd rhsv = Eigen::VectorXcd::Zero(mesh.n());
                if (!ops.dde.drift.empty())
                  rhsv += ops.dde.drift.eval(t).cast<Complex>() * pf.eval(t);
                for (const auto &d : ops.eff_delays) {
                  const double u = t - d.tau;
                  const Eigen::MatrixXcd B = d.coeff.eval(t).cast<Complex>();
                  if (u >= -1.0)
                    rhsv += B * pf.eval(u);
                  else
                    rhsv += mu * (B * pf.eval(1.0 + u)).eval();
                }
                worst_r = std::max(worst_r, (xd - rhsv).cwiseAbs().maxCoeff() / nrm);
              } else {
                const Eigen::VectorXcd diff = pf.eval(t) - mu * pf.eval(1.0 + t);
                worst_r = std::max(worst_r, diff.cwiseAbs().maxCoeff() / nrm);
              }
            }
          }
          return worst_r;
        }();
        if (jump > 1e-8)
          record.warnings.push_back("eigenfunction jump " + std::to_string(jump) +
                                    " above 1e-8; consider raising p");
        if (resid > 1e-7)
          record.warnings.push_back("eigenfunction residual " + std::to_string(resid) +
                                    " above 1e-7; consider raising p");
        worst = std::max(worst, std::max(jump, resid));
      }
      record.eigenfunctions.push_back(std::move(pf));
    }
  }
  record.residual = worst;
}

PoleSet locate_poles(const DiscretizedOperators &ops, double R_search) {
  const int N = ops.dofs();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(N, N) - ops.M0);
  const Eigen::MatrixXd W = lu.solve(ops.L);
  Eigen::EigenSolver<Eigen::MatrixXd> es(W, /*computeEigenvectors=*/false);

  std::vector<Complex> mus;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex lam = es.eigenvalues()[i];
    if (std::abs(lam) < 1e-14) continue;
    const Complex mu = 1.0 / lam;
    if (std::abs(mu) <= R_search) mus.push_back(mu);
  }
  std::sort(mus.begin(), mus.end(), [](Complex a, Complex b) {
    if (std::abs(std::abs(a) - std::abs(b)) > 1e-14) return std::abs(a) < std::abs(b);
    return std::arg(a) < std::arg(b);
  });

  PoleSet ps;
  ps.k = ops.mesh->k();
  for (std::size_t i = 0; i < mus.size();) {
    std::size_t j = i + 1;
    while (j < mus.size() && std::abs(mus[j] - mus[i]) <= 1e-6 * std::max(1.0, std::abs(mus[i])))
      ++j;
    ps.poles.emplace_back(mus[i], static_cast<int>(j - i));
    i = j;
  }
  return ps;
}

} // namespace ddef
