// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "ddef/io.hpp"
#include "ddef/oracle.hpp"

namespace py = pybind11;
using namespace ddef;

namespace {

struct Session {
  PeriodicDDE dde;
  DiscretizedOperators ops;
};

Session make_session(const PeriodicDDE &dde, double radius, int k, int p) {
  Session s;
  s.dde = dde;
  int k_used = k;
  if (k_used <= 0) k_used = select_k(compute_bounds(dde), radius, dde.m);
  s.ops = assemble(dde, build_mesh(dde, k_used, p));
  return s;
}

py::dict record_to_dict(const MultiplierRecord &r) {
  py::dict d;
  d["mu"] = r.mu_star;
  d["lambda"] = r.lambda;
  d["alg_mult"] = r.alg_mult;
  d["geom_mult"] = r.geom_mult;
  std::size_t maxlen = 0;
  for (const auto &c : r.chains) maxlen = std::max(maxlen, c.size());
  d["max_chain_len"] = maxlen;
  d["residual"] = r.residual;
  d["warnings"] = r.warnings;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Floquet multipliers of linear periodic delay-differential equations "
            "via the pole-free extended characteristic matrix";

  py::class_<PeriodicDDE>(m, "Problem")
      .def_static("from_json", [](const std::string &text) {
        return problem_from_json(nlohmann::json::parse(text));
      })
      .def_static("load", &load_problem)
      .def_property_readonly("n", [](const PeriodicDDE &d) { return d.n; })
      .def_property_readonly("m", [](const PeriodicDDE &d) { return d.m; })
      .def("to_json", [](const PeriodicDDE &d) { return problem_to_json(d).dump(); });

  py::class_<Session>(m, "Session")
      .def(py::init(&make_session), py::arg("problem"), py::arg("radius") = 2.0,
           py::arg("k") = 0, py::arg("p") = 16)
      .def_property_readonly("k", [](const Session &s) { return s.ops.mesh->k(); })
      .def_property_readonly("p", [](const Session &s) { return s.ops.mesh->p(); })
      .def_property_readonly("guaranteed_radius", [](const Session &s) { return s.ops.r_max; })
      .def("charmat",
           [](const Session &s, Complex mu) { return evaluate(s.ops, mu).delta; },
           py::arg("mu"))
      .def("logdet",
           [](const Session &s, Complex mu) { return evaluate(s.ops, mu).logdet; },
           py::arg("mu"))
      .def("multipliers",
           [](const Session &s, double r_search) {
             FindResult res = find_multipliers(s.ops, r_search);
             py::list out;
             for (const auto &r : res.records) out.append(record_to_dict(r));
             return out;
           },
           py::arg("r_search") = 2.0)
      .def("poles",
           [](const Session &s, double r_search) {
             PoleSet ps = locate_poles(s.ops, r_search);
             py::list out;
             for (const auto &[mu, mult] : ps.poles) {
               py::dict d;
               d["mu"] = mu;
               d["est_mult"] = mult;
               out.append(d);
             }
             return out;
           },
           py::arg("r_search") = 2.0)
      .def("count_roots",
           [](const Session &s, Complex center, double radius, int samples) {
             ContourReport rep = count_roots(s.ops, center, radius, samples);
             py::dict d;
             d["winding"] = rep.winding;
             d["residual"] = rep.residual;
             d["reliable"] = rep.reliable;
             return d;
           },
           py::arg("center"), py::arg("radius"), py::arg("samples") = 32)
      .def("oracle_multipliers",
           [](const Session &s, double min_abs_lambda) {
             auto lams = oracle_multipliers(discretize_T(s.ops), min_abs_lambda);
             py::list out;
             for (const auto &[lam, cnt] : lams) {
               py::dict d;
               d["lambda"] = lam;
               d["cluster_mult"] = cnt;
               out.append(d);
             }
             return out;
           },
           py::arg("min_abs_lambda") = 0.5)
      .def("equivalence_residuals", [](const Session &s, Complex mu) {
        EquivalenceReport rep = verify_equivalence(s.ops, mu);
        py::dict d;
        d["fge_h"] = rep.res_fge_h;
        d["e_inv"] = rep.res_e_inv;
        d["f_inv"] = rep.res_f_inv;
        return d;
      });

  m.def("select_k",
        [](const PeriodicDDE &dde, double R) {
          return select_k(compute_bounds(dde), R, dde.m);
        },
        py::arg("problem"), py::arg("R") = 2.0);
  m.def("pole_reference_single_delay_half", &pole_reference_single_delay_half);
}
