// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_SPECTRUM_HPP
#define DDEF_SPECTRUM_HPP

#include <string>

#include "ddef/charmat.hpp"

namespace ddef {

struct ContourReport {
  Complex center;
  double radius = 0.0;
  int winding = 0;
  int samples = 0;
  double residual = 0.0; // |quadrature - winding|
  bool reliable = false; // residual < 0.25
};

struct MultiplierRecord {
  Complex mu_star;
  Complex lambda;
  int alg_mult = 1;
  int geom_mult = 1;
  std::vector<std::vector<Eigen::VectorXcd>> chains; // per chain: y_0 .. y_{len-1}
  std::vector<PiecewiseFunction> eigenfunctions;     // chain-major x_0 .. x_{len-1}
  double residual = 0.0; // max of eigenfunction jump & DDE residual (chain heads)
  std::vector<std::string> warnings;
  bool flagged() const { return !warnings.empty(); }
};

struct FindOptions {
  int samples = 32;
  int max_samples = 256;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  double cluster_radius = 1e-3;
  int max_depth = 16;
  double dedupe_tol = 1e-8;
  bool with_eigenfunctions = true;
};

struct FindResult {
  std::vector<MultiplierRecord> records;
  std::vector<std::string> warnings; // search-level inconsistencies
  ContourReport top;
  bool flagged() const;
};

struct JordanResult {
  int geom_mult = 1;
  std::vector<std::vector<Eigen::VectorXcd>> chains;
  std::vector<std::string> warnings;
};

struct PoleSet {
  std::vector<std::pair<Complex, int>> poles; // (mu, estimated multiplicity)
  int k = 0;
};

// Argument-principle count of roots of det Delta_k inside the circle, by
// trapezoid quadrature of tr(Delta^{-1} Delta').
ContourReport count_roots(const DiscretizedOperators &ops, Complex center, double radius,
                          int samples);

// Roots of det Delta_k in |mu| <= R_search with multiplicities, Jordan chains
// and reconstructed eigenfunctions. Recursive disk subdivision driven by
// count_roots; Newton on 1/tr(Delta^{-1} Delta') per cluster.
FindResult find_multipliers(const DiscretizedOperators &ops, double R_search,
                            const FindOptions &opts = {});

// Kernel basis + greedy chain extension through the block triangular system
// built from the derivative stack at mu_star.
JordanResult jordan_chains(const DiscretizedOperators &ops, Complex mu_star, int alg_mult);

// Fill record.eigenfunctions from record.chains via the expansion
// x_j = sum_{i<=j} (N L)^i N S y_{j-i}; sets record.residual / warnings.
void eigenfunctions(const DiscretizedOperators &ops, MultiplierRecord &record);

// Poles of the construction: reciprocals of eigenvalues of (I-M0)^{-1} L.
PoleSet locate_poles(const DiscretizedOperators &ops, double R_search);

} // namespace ddef

#endif
