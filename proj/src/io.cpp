// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include "ddef/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ddef {

using nlohmann::json;

namespace {

FourierEntry entry_from_json(const json &j) {
  FourierEntry e;
  e.a0 = j.value("a0", 0.0);
  if (j.contains("cos")) e.cs = j.at("cos").get<std::vector<double>>();
  if (j.contains("sin")) e.sn = j.at("sin").get<std::vector<double>>();
  return e;
}

json entry_to_json(const FourierEntry &e) {
  json j;
  j["a0"] = e.a0;
  j["cos"] = e.cs;
  j["sin"] = e.sn;
  return j;
}

FourierMatrix matrix_from_json(const json &j, int n, const char *field) {
  if (!j.is_array() || static_cast<int>(j.size()) != n * n)
    throw std::invalid_argument(std::string("problem file: field '") + field +
                                "' must be a row-major array of n*n fourier entries");
  FourierMatrix f(n, n);
  for (int i = 0; i < n * n; ++i) f.entries()[i] = entry_from_json(j[i]);
  return f;
}

json matrix_to_json(const FourierMatrix &f) {
  json arr = json::array();
  for (const auto &e : f.entries()) arr.push_back(entry_to_json(e));
  return arr;
}

} // namespace

PeriodicDDE load_problem(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception &e) {
    throw std::invalid_argument("problem file '" + path + "' is not valid JSON: " + e.what());
  }
  return problem_from_json(j);
}

PeriodicDDE problem_from_json(const json &j) {
  PeriodicDDE dde;
  if (!j.contains("n")) throw std::invalid_argument("problem file: missing field 'n'");
  dde.n = j.at("n").get<int>();
  dde.m = j.value("m", 1);
  if (dde.n < 1) throw std::invalid_argument("problem file: field 'n' must be >= 1");
  if (j.contains("drift")) dde.drift = matrix_from_json(j.at("drift"), dde.n, "drift");
  if (j.contains("delays")) {
    for (const auto &dj : j.at("delays")) {
      if (dj.contains("tau")) {
        DiscreteDelay d;
        d.tau = dj.at("tau").get<double>();
        if (!dj.contains("coeff"))
          throw std::invalid_argument("problem file: delay entry missing field 'coeff'");
        d.coeff = matrix_from_json(dj.at("coeff"), dde.n, "coeff");
        dde.delays.emplace_back(std::move(d));
      } else if (dj.contains("theta_lo")) {
        DistributedDelay d;
        d.theta_lo = dj.at("theta_lo").get<double>();
        d.theta_hi = dj.at("theta_hi").get<double>();
        d.quadrature_order = dj.value("quadrature_order", 8);
        if (!dj.contains("kernel"))
          throw std::invalid_argument("problem file: distributed delay missing field 'kernel'");
        for (const auto &kj : dj.at("kernel"))
          d.kernel.push_back(matrix_from_json(kj, dde.n, "kernel"));
        dde.delays.emplace_back(std::move(d));
      } else {
        throw std::invalid_argument(
            "problem file: delay entry needs field 'tau' or 'theta_lo'/'theta_hi'");
      }
    }
  }
  dde.validate();
  return dde;
}

json problem_to_json(const PeriodicDDE &dde) {
  json j;
  j["n"] = dde.n;
  j["m"] = dde.m;
  if (!dde.drift.empty()) j["drift"] = matrix_to_json(dde.drift);
  json arr = json::array();
  for (const auto &term : dde.delays) {
    json dj;
    if (const auto *d = std::get_if<DiscreteDelay>(&term)) {
      dj["tau"] = d->tau;
      dj["coeff"] = matrix_to_json(d->coeff);
    } else {
      const auto &t = std::get<DistributedDelay>(term);
      dj["theta_lo"] = t.theta_lo;
      dj["theta_hi"] = t.theta_hi;
      dj["quadrature_order"] = t.quadrature_order;
      json karr = json::array();
      for (const auto &K : t.kernel) karr.push_back(matrix_to_json(K));
      dj["kernel"] = karr;
    }
    arr.push_back(dj);
  }
  j["delays"] = arr;
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_multiplier_csv(const std::string &path, const std::vector<MultiplierRecord> &records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "re_lambda,im_lambda,abs_lambda,re_mu,im_mu,alg_mult,geom_mult,max_chain_len,residual\n";
  for (const auto &r : records) {
    std::size_t maxlen = 0;
    for (const auto &c : r.chains) maxlen = std::max(maxlen, c.size());
    out << format_double(r.lambda.real()) << ',' << format_double(r.lambda.imag()) << ','
        << format_double(std::abs(r.lambda)) << ',' << format_double(r.mu_star.real()) << ','
        << format_double(r.mu_star.imag()) << ',' << r.alg_mult << ',' << r.geom_mult << ','
        << maxlen << ',' << format_double(r.residual) << '\n';
  }
}

void write_pole_csv(const std::string &path, const PoleSet &poles) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "re_mu,im_mu,est_mult\n";
  for (const auto &[mu, mult] : poles.poles)
    out << format_double(mu.real()) << ',' << format_double(mu.imag()) << ',' << mult << '\n';
}

void write_logdet_csv(const std::string &path, const std::vector<LogdetSample> &samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "re_mu,im_mu,re_logdet,im_logdet,status\n";
  for (const auto &s : samples)
    out << format_double(s.mu.real()) << ',' << format_double(s.mu.imag()) << ','
        << format_double(s.logdet.real()) << ',' << format_double(s.logdet.imag()) << ','
        << (s.ok ? "ok" : "region") << '\n';
}

void dump_operators(const std::string &path, const DiscretizedOperators &ops) {
  const struct {
    const char *name;
    const Eigen::MatrixXd *mat;
  } mats[] = {{"S", &ops.S},     {"Gplus", &ops.Gp}, {"Gminus0", &ops.Gm0},
              {"Gminus1", &ops.Gm1}, {"M0", &ops.M0},    {"L", &ops.L}};
  json header;
  header["dtype"] = "complex128_row_major";
  header["n"] = ops.n();
  header["k"] = ops.mesh->k();
  header["m"] = ops.mesh->m();
  header["p"] = ops.mesh->p();
  json list = json::array();
  std::size_t offset = 0;
  for (const auto &m : mats) {
    json e;
    e["name"] = m.name;
    e["rows"] = m.mat->rows();
    e["cols"] = m.mat->cols();
    e["offset_bytes"] = offset;
    offset += static_cast<std::size_t>(m.mat->size()) * 2 * sizeof(double);
    list.push_back(e);
  }
  header["matrices"] = list;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << header.dump() << '\n';
  for (const auto &m : mats) {
    for (Eigen::Index r = 0; r < m.mat->rows(); ++r)
      for (Eigen::Index c = 0; c < m.mat->cols(); ++c) {
        const double re = (*m.mat)(r, c), im = 0.0;
        out.write(reinterpret_cast<const char *>(&re), sizeof(double));
        out.write(reinterpret_cast<const char *>(&im), sizeof(double));
      }
  }
}

} // namespace ddef
