// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ddef/errors.hpp"
#include "ddef/io.hpp"
#include "ddef/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ddef;

namespace {

struct RunConfig {
  std::string problem_path;
  double radius = 2.0;
  int k_override = 0; // 0 = auto
  int degree = 16;
  std::string out_dir = ".";
  std::string format = "csv";
  unsigned long seed = 12345;
  std::string dump_path;
  int grid = 64;
  double re_min = -2.0, re_max = 2.0, im_min = -2.0, im_max = 2.0;
};

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

json make_manifest(const RunConfig &cfg, const std::string &command, const PeriodicDDE &dde,
                   const CoefficientBounds &bounds, int k_min, int k_used,
                   double r_max, double assemble_ms, double compute_ms) {
  json m;
  m["command"] = command;
  m["problem"] = cfg.problem_path;
  m["n"] = dde.n;
  m["m"] = dde.m;
  m["p"] = cfg.degree;
  m["radius"] = cfg.radius;
  m["k_min"] = k_min;
  m["k_used"] = k_used;
  m["k_rule"] = (dde.m == 1) ? "C*(R)" : "weighted-norm";
  m["c_star_R"] = bounds.sup_A + cfg.radius * bounds.sup_B_total;
  m["sup_A"] = bounds.sup_A;
  m["sup_B_total"] = bounds.sup_B_total;
  m["V_bar"] = bounds.V_bar;
  m["guaranteed_radius"] = std::isfinite(r_max) ? json(r_max) : json("inf");
  m["seed"] = cfg.seed;
  m["timings_ms"] = {{"assemble", assemble_ms}, {"compute", compute_ms}};
  return m;
}

void write_manifest(const RunConfig &cfg, json manifest) {
  std::ofstream out(fs::path(cfg.out_dir) / "manifest.json");
  out << manifest.dump(2) << '\n';
}

struct Assembled {
  DiscretizedOperators ops;
  CoefficientBounds bounds;
  int k_min = 0;
  int k_used = 0;
  double assemble_ms = 0.0;
};

Assembled prepare(const RunConfig &cfg, const PeriodicDDE &dde, bool enforce_k, int default_k = 0) {
  Timer t;
  Assembled a;
  a.bounds = compute_bounds(dde);
  a.k_min = select_k(a.bounds, cfg.radius, dde.m);
  a.k_used = cfg.k_override > 0 ? cfg.k_override : (default_k > 0 ? default_k : a.k_min);
  if (enforce_k && a.k_used < a.k_min)
    throw std::invalid_argument("k = " + std::to_string(a.k_used) +
                                " violates the contraction bound; minimum k for R = " +
                                std::to_string(cfg.radius) + " is " + std::to_string(a.k_min));
  a.ops = assemble(dde, build_mesh(dde, a.k_used, cfg.degree));
  a.assemble_ms = t.ms();
  return a;
}

json record_to_json(const MultiplierRecord &r) {
  std::size_t maxlen = 0;
  for (const auto &c : r.chains) maxlen = std::max(maxlen, c.size());
  json j;
  j["re_lambda"] = r.lambda.real();
  j["im_lambda"] = r.lambda.imag();
  j["abs_lambda"] = std::abs(r.lambda);
  j["re_mu"] = r.mu_star.real();
  j["im_mu"] = r.mu_star.imag();
  j["alg_mult"] = r.alg_mult;
  j["geom_mult"] = r.geom_mult;
  j["max_chain_len"] = maxlen;
  j["residual"] = r.residual;
  j["warnings"] = r.warnings;
  return j;
}

int cmd_multipliers(const RunConfig &cfg) {
  const PeriodicDDE dde = load_problem(cfg.problem_path);
  Assembled a = prepare(cfg, dde, /*enforce_k=*/true);
  Timer t;
  const double r_search = std::min(cfg.radius, 0.99 * a.ops.r_max);
  FindResult res = find_multipliers(a.ops, r_search);
  const double compute_ms = t.ms();

  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto &r : res.records) arr.push_back(record_to_json(r));
    std::ofstream out(fs::path(cfg.out_dir) / "multipliers.json");
    out << arr.dump(2) << '\n';
  } else {
    write_multiplier_csv((fs::path(cfg.out_dir) / "multipliers.csv").string(), res.records);
  }
  if (!cfg.dump_path.empty()) dump_operators(cfg.dump_path, a.ops);

  json manifest = make_manifest(cfg, "multipliers", dde, a.bounds, a.k_min, a.k_used,
                                a.ops.r_max, a.assemble_ms, compute_ms);
  manifest["r_search"] = r_search;
  manifest["top_winding"] = res.top.winding;
  manifest["warnings"] = res.warnings;
  write_manifest(cfg, manifest);
  for (const auto &r : res.records)
    std::cout << "lambda = " << r.lambda << "  mu = " << r.mu_star << "  alg " << r.alg_mult
              << " geom " << r.geom_mult << '\n';
  return res.flagged() ? 2 : 0;
}

int cmd_poles(const RunConfig &cfg) {
  const PeriodicDDE dde = load_problem(cfg.problem_path);
  // pole demonstrations intentionally allow k below the contraction bound
  Assembled a = prepare(cfg, dde, /*enforce_k=*/false, /*default_k=*/1);
  Timer t;
  PoleSet ps = locate_poles(a.ops, cfg.radius);
  const double compute_ms = t.ms();
  write_pole_csv((fs::path(cfg.out_dir) / "poles.csv").string(), ps);
  if (!cfg.dump_path.empty()) dump_operators(cfg.dump_path, a.ops);
  json manifest = make_manifest(cfg, "poles", dde, a.bounds, a.k_min, a.k_used, a.ops.r_max,
                                a.assemble_ms, compute_ms);
  manifest["poles_found"] = ps.poles.size();
  write_manifest(cfg, manifest);
  for (const auto &[mu, mult] : ps.poles)
    std::cout << "pole mu = " << mu << "  est_mult " << mult << '\n';
  return 0;
}

int cmd_jordan(const RunConfig &cfg) {
  const PeriodicDDE dde = load_problem(cfg.problem_path);
  Assembled a = prepare(cfg, dde, /*enforce_k=*/true);
  Timer t;
  const double r_search = std::min(cfg.radius, 0.99 * a.ops.r_max);
  FindResult res = find_multipliers(a.ops, r_search);
  json arr = json::array();
  for (const auto &r : res.records) {
    json rec = record_to_json(r);
    json chains = json::array();
    for (const auto &chain : r.chains) {
      json cj = json::array();
      for (const auto &y : chain) {
        json vec = json::array();
        for (Eigen::Index i = 0; i < y.size(); ++i)
          vec.push_back({y[i].real(), y[i].imag()});
        cj.push_back(vec);
      }
      chains.push_back(cj);
    }
    rec["chains"] = chains;
    arr.push_back(rec);
  }
  const double compute_ms = t.ms();
  std::ofstream out(fs::path(cfg.out_dir) / "jordan.json");
  out << arr.dump(2) << '\n';
  json manifest = make_manifest(cfg, "jordan", dde, a.bounds, a.k_min, a.k_used, a.ops.r_max,
                                a.assemble_ms, compute_ms);
  write_manifest(cfg, manifest);
  return res.flagged() ? 2 : 0;
}

int cmd_charmat_sample(const RunConfig &cfg) {
  const PeriodicDDE dde = load_problem(cfg.problem_path);
  Assembled a = prepare(cfg, dde, /*enforce_k=*/false);
  Timer t;
  std::vector<Complex> mus;
  mus.reserve(static_cast<std::size_t>(cfg.grid) * cfg.grid);
  for (int i = 0; i < cfg.grid; ++i) {
    const double re =
        cfg.re_min + (cfg.re_max - cfg.re_min) * (cfg.grid == 1 ? 0.0 : double(i) / (cfg.grid - 1));
    for (int j = 0; j < cfg.grid; ++j) {
      const double im =
          cfg.im_min + (cfg.im_max - cfg.im_min) * (cfg.grid == 1 ? 0.0 : double(j) / (cfg.grid - 1));
      mus.emplace_back(re, im);
    }
  }
  auto samples = logdet_grid(a.ops, mus);
  const double compute_ms = t.ms();
  write_logdet_csv((fs::path(cfg.out_dir) / "charmat_grid.csv").string(), samples);
  if (!cfg.dump_path.empty()) dump_operators(cfg.dump_path, a.ops);
  json manifest = make_manifest(cfg, "charmat_sample", dde, a.bounds, a.k_min, a.k_used,
                                a.ops.r_max, a.assemble_ms, compute_ms);
  manifest["rows"] = samples.size();
  write_manifest(cfg, manifest);
  return 0;
}

int cmd_oracle_compare(const RunConfig &cfg) {
  const PeriodicDDE dde = load_problem(cfg.problem_path);
  Assembled a = prepare(cfg, dde, /*enforce_k=*/true);
  Timer t;
  const double r_search = std::min(cfg.radius, 0.99 * a.ops.r_max);
  FindResult res = find_multipliers(a.ops, r_search);
  MonodromyMatrix T = discretize_T(a.ops);
  auto oracle = oracle_multipliers(T, 1.0 / r_search);

  bool all_matched = true;
  double worst = 0.0;
  json rows = json::array();
  for (const auto &r : res.records) {
    double best = std::numeric_limits<double>::infinity();
    int omult = 0;
    Complex olam;
    for (const auto &[lam, cnt] : oracle) {
      const double d = std::abs(lam - r.lambda) / std::max(1.0, std::abs(r.lambda));
      if (d < best) {
        best = d;
        omult = cnt;
        olam = lam;
      }
    }
    const bool match = best <= 1e-6 && omult == r.alg_mult;
    all_matched = all_matched && match;
    worst = std::max(worst, best);
    json row = record_to_json(r);
    row["oracle_re_lambda"] = olam.real();
    row["oracle_im_lambda"] = olam.imag();
    row["oracle_mult"] = omult;
    row["rel_diff"] = best;
    row["match"] = match;
    rows.push_back(row);
  }
  const double compute_ms = t.ms();

  std::ofstream csv(fs::path(cfg.out_dir) / "oracle_compare.csv");
  csv << "re_lambda,im_lambda,alg_mult,oracle_re_lambda,oracle_im_lambda,oracle_mult,rel_diff\n";
  for (const auto &row : rows)
    csv << format_double(row["re_lambda"].get<double>()) << ','
        << format_double(row["im_lambda"].get<double>()) << ',' << row["alg_mult"] << ','
        << format_double(row["oracle_re_lambda"].get<double>()) << ','
        << format_double(row["oracle_im_lambda"].get<double>()) << ',' << row["oracle_mult"]
        << ',' << format_double(row["rel_diff"].get<double>()) << '\n';

  json manifest = make_manifest(cfg, "oracle_compare", dde, a.bounds, a.k_min, a.k_used,
                                a.ops.r_max, a.assemble_ms, compute_ms);
  manifest["all_matched"] = all_matched;
  manifest["worst_rel_diff"] = worst;
  manifest["rows"] = rows;
  write_manifest(cfg, manifest);
  std::cout << (all_matched ? "oracle agreement OK" : "oracle MISMATCH") << ", worst rel diff "
            << worst << '\n';
  return (all_matched && !res.flagged()) ? 0 : 2;
}

int cmd_selfcheck(const RunConfig &cfg) {
  const PeriodicDDE dde = load_problem(cfg.problem_path);
  Assembled a = prepare(cfg, dde, /*enforce_k=*/true);
  Timer t;
  json checks = json::array();
  bool all_pass = true;
  auto push = [&](const std::string &name, double measured, double bound, bool pass) {
    checks.push_back({{"name", name}, {"measured", measured}, {"bound", bound}, {"pass", pass}});
    all_pass = all_pass && pass;
  };

  const DiscretizedOperators &ops = a.ops;
  const int nk = ops.nk();

  // Gamma+ S = I
  const double gid = (ops.Gp * ops.S - Eigen::MatrixXd::Identity(nk, nk)).cwiseAbs().maxCoeff();
  push("gamma_plus_S_identity", gid, 1e-14, gid <= 1e-14);

  // det Delta(0) = 1
  const Complex ld0 = evaluate(ops, Complex(0, 0)).logdet;
  const double det0 = std::abs(std::exp(ld0) - 1.0);
  push("det_delta_at_0", det0, 1e-12, det0 <= 1e-12);

  // equivalence residuals at seeded random mu, for p and 2p
  std::mt19937_64 rng(cfg.seed);
  auto rand_mu = [&](double rad) {
    const double r = rad * std::sqrt(static_cast<double>(rng()) / double(rng.max()));
    const double th = 2.0 * M_PI * static_cast<double>(rng()) / double(rng.max());
    return Complex(r * std::cos(th), r * std::sin(th));
  };
  const double rad = 0.9 * std::min(cfg.radius, 0.99 * ops.r_max);
  double eq_worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const EquivalenceReport rep = verify_equivalence(ops, rand_mu(rad));
    eq_worst = std::max({eq_worst, rep.res_fge_h, rep.res_e_inv, rep.res_f_inv});
  }
  push("equivalence_residual_p", eq_worst, 1e-8, eq_worst <= 1e-8);
  {
    RunConfig c2 = cfg;
    c2.degree = 2 * cfg.degree;
    Assembled a2 = prepare(c2, dde, false, a.k_used);
    std::mt19937_64 rng2(cfg.seed);
    double w2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double r = rad * std::sqrt(static_cast<double>(rng2()) / double(rng2.max()));
      const double th = 2.0 * M_PI * static_cast<double>(rng2()) / double(rng2.max());
      const EquivalenceReport rep = verify_equivalence(a2.ops, Complex(r * std::cos(th), r * std::sin(th)));
      w2 = std::max({w2, rep.res_fge_h, rep.res_e_inv, rep.res_f_inv});
    }
    push("equivalence_residual_2p", w2, 1e-8, w2 <= 1e-8);
  }

  // norm bound at |mu| >= 1 (domain where the contraction constant applies)
  if (dde.m == 1) {
    for (double mu_abs : {1.0, std::min(cfg.radius, 0.99 * ops.r_max)}) {
      if (mu_abs < 1.0) continue;
      const double measured = operator_norm_inf(ops, mu_abs);
      const double bound =
          (a.bounds.sup_A + mu_abs * a.bounds.sup_B_total) / a.k_used * 1.05;
      push("norm_bound_mu_" + std::to_string(mu_abs), measured, bound, measured <= bound);
    }
  }

  // no pole inside the working disk for the selected k
  {
    PoleSet ps = locate_poles(ops, std::min(cfg.radius, 0.99 * ops.r_max));
    const double closest =
        ps.poles.empty() ? std::numeric_limits<double>::infinity() : std::abs(ps.poles[0].first);
    push("pole_free_disk", ps.poles.empty() ? 0.0 : closest, cfg.radius, ps.poles.empty());
  }

  // analytic derivative vs central finite differences
  {
    const Complex mu = rand_mu(0.7 * rad);
    const double h = 1e-5;
    const DerivativeStack st = derivatives(ops, mu, 1);
    const Eigen::MatrixXcd fd_re =
        (evaluate(ops, mu + h).delta - evaluate(ops, mu - h).delta) / (2.0 * h);
    const Eigen::MatrixXcd fd_im =
        (evaluate(ops, mu + Complex(0, h)).delta - evaluate(ops, mu - Complex(0, h)).delta) /
        Complex(0, 2.0 * h);
    const double rel = std::max((st.d[1] - fd_re).norm(), (st.d[1] - fd_im).norm()) /
                       std::max(1e-300, st.d[1].norm());
    push("derivative_vs_fd", rel, 1e-6, rel <= 1e-6);
  }

  // k-invariance of the multiplier multiset
  {
    const double r_search = std::min(cfg.radius, 0.99 * ops.r_max);
    FindOptions fo;
    fo.with_eigenfunctions = false;
    FindResult r1 = find_multipliers(ops, r_search, fo);
    Assembled a2 = prepare(cfg, dde, false, 2 * a.k_used);
    FindResult r2 = find_multipliers(a2.ops, r_search, fo);
    double worst = 0.0;
    bool same = r1.records.size() == r2.records.size();
    if (same) {
      for (std::size_t i = 0; i < r1.records.size(); ++i)
        worst = std::max(worst, std::abs(r1.records[i].mu_star - r2.records[i].mu_star) /
                                    std::max(1.0, std::abs(r1.records[i].mu_star)));
    }
    push("k_invariance", same ? worst : std::numeric_limits<double>::infinity(), 1e-8,
         same && worst <= 1e-8);
  }

  const double compute_ms = t.ms();
  json manifest = make_manifest(cfg, "selfcheck", dde, a.bounds, a.k_min, a.k_used, a.ops.r_max,
                                a.assemble_ms, compute_ms);
  manifest["checks"] = checks;
  manifest["all_pass"] = all_pass;
  write_manifest(cfg, manifest);
  std::ofstream out(fs::path(cfg.out_dir) / "selfcheck.json");
  out << json({{"checks", checks}, {"all_pass", all_pass}}).dump(2) << '\n';
  for (const auto &c : checks)
    std::cout << (c["pass"].get<bool>() ? "[ok]   " : "[FAIL] ") << c["name"].get<std::string>()
              << "  measured " << c["measured"].get<double>() << "  bound "
              << c["bound"].get<double>() << '\n';
  return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char **argv) {
  // DDEFLOQUET_THREADS caps the BLAS pool; must be set before first use
  if (const char *th = std::getenv("DDEFLOQUET_THREADS")) {
    setenv("OPENBLAS_NUM_THREADS", th, 0);
    setenv("OMP_NUM_THREADS", th, 0);
  }

  CLI::App app{"Floquet multipliers, Jordan chains and construction poles of "
               "linear delay-differential equations with periodic coefficients"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App *sub, bool needs_problem = true) {
    sub->add_option("--problem", cfg.problem_path, "problem file (JSON)")->required(needs_problem);
    sub->add_option("--radius", cfg.radius, "disk radius R, multipliers |lambda| > 1/R (default 2)");
    sub->add_option("--k", cfg.k_override, "override the number of subintervals per period");
    sub->add_option("--degree", cfg.degree, "polynomial degree per panel (default 16)");
    sub->add_option("--out", cfg.out_dir, "output directory (default .)");
    sub->add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    sub->add_option("--dump-operators", cfg.dump_path, "write assembled matrices (binary + JSON header)");
  };

  auto *mult = app.add_subcommand("multipliers", "Floquet multipliers with |lambda| > 1/R");
  add_common(mult);
  auto *poles = app.add_subcommand("poles", "poles of the k-subinterval construction (default k=1)");
  add_common(poles);
  auto *jordan = app.add_subcommand("jordan", "multipliers with Jordan chain vectors");
  add_common(jordan);
  auto *charm = app.add_subcommand("charmat-sample", "log det Delta_k on a mu-grid");
  add_common(charm);
  charm->add_option("--grid", cfg.grid, "grid points per axis (default 64)");
  charm->add_option("--re-min", cfg.re_min);
  charm->add_option("--re-max", cfg.re_max);
  charm->add_option("--im-min", cfg.im_min);
  charm->add_option("--im-max", cfg.im_max);
  auto *ocmp = app.add_subcommand("oracle-compare", "determinant roots vs dense monodromy spectrum");
  add_common(ocmp);
  auto *self = app.add_subcommand("selfcheck", "property suite on the given problem");
  add_common(self);

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(cfg.out_dir);
    if (mult->parsed()) return cmd_multipliers(cfg);
    if (poles->parsed()) return cmd_poles(cfg);
    if (jordan->parsed()) return cmd_jordan(cfg);
    if (charm->parsed()) return cmd_charmat_sample(cfg);
    if (ocmp->parsed()) return cmd_oracle_compare(cfg);
    if (self->parsed()) return cmd_selfcheck(cfg);
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const RegionViolation &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
