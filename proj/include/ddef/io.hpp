// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_IO_HPP
#define DDEF_IO_HPP

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "ddef/charmat.hpp"
#include "ddef/spectrum.hpp"

namespace ddef {

// Problem file schema:
// {"n": int, "m": int, "drift": fourier-matrix,
//  "delays": [ {"tau": float, "coeff": fourier-matrix}
//            | {"theta_lo": f, "theta_hi": f, "kernel": [fourier-matrix, ...],
//               "quadrature_order": int} ]}
// fourier-matrix: row-major array of n*n entries {"a0": f, "cos": [...], "sin": [...]}.
PeriodicDDE load_problem(const std::string &path);
PeriodicDDE problem_from_json(const nlohmann::json &j);
nlohmann::json problem_to_json(const PeriodicDDE &dde);

std::string format_double(double v); // deterministic %.17g

void write_multiplier_csv(const std::string &path, const std::vector<MultiplierRecord> &records);
void write_pole_csv(const std::string &path, const PoleSet &poles);
void write_logdet_csv(const std::string &path, const std::vector<LogdetSample> &samples);

// flat binary of complex doubles, row-major, preceded by a one-line JSON header
void dump_operators(const std::string &path, const DiscretizedOperators &ops);

} // namespace ddef

#endif
