// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_CHARMAT_HPP
#define DDEF_CHARMAT_HPP

#include <Eigen/LU>

#include "ddef/operators.hpp"

namespace ddef {

// Delta_k(mu) = I - Gamma_-(mu) [I - M_k(mu)]^{-1} S with its factorization,
// log-determinant and a reusable factorization of the inner solve.
struct CharMatrixEval {
  Complex mu;
  Eigen::MatrixXcd delta;                                   // nk x nk
  std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu; // of delta
  Complex logdet;                                           // log|det| + i arg
  std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXcd>> solve_cache; // of I-M(mu)
};

struct DerivativeStack {
  Complex mu;
  std::vector<Eigen::MatrixXcd> d; // d[j] = Delta_k^{(j)}(mu), j = 0..jmax
};

struct EquivalenceReport {
  Complex mu;
  double res_fge_h = 0.0; // ||F G E - H|| / ||H||
  double res_e_inv = 0.0; // ||E E^{-1} - I||
  double res_f_inv = 0.0; // ||F F^{-1} - I||
};

struct LogdetSample {
  Complex mu;
  Complex logdet;
  bool ok = true; // false: region violation at this grid point
};

// One factorization of I - M(mu) with nk right-hand sides; throws
// RegionViolation when the factorization pivots collapse.
CharMatrixEval evaluate(const DiscretizedOperators &ops, Complex mu);

// Analytic mu-derivatives from the affine splits (no numerical
// differentiation): with N = (I-M(mu))^{-1} and X_j = j! (N L)^j N S,
//   Delta^{(j)} = -Gamma_-(mu) X_j - j Gm1 X_{j-1}.
DerivativeStack derivatives(const DiscretizedOperators &ops, Complex mu, int jmax);

// Numerical check of H = F G E with E, F, G = I - mu T as assembled matrices.
EquivalenceReport verify_equivalence(const DiscretizedOperators &ops, Complex mu);

std::vector<LogdetSample> logdet_grid(const DiscretizedOperators &ops,
                                      const std::vector<Complex> &mus);

// log det from an existing LU factorization (sum of pivot logs).
Complex logdet_from_lu(const Eigen::PartialPivLU<Eigen::MatrixXcd> &lu);

} // namespace ddef

#endif
