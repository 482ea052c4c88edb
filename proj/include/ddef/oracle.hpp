// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_ORACLE_HPP
#define DDEF_ORACLE_HPP

#include "ddef/operators.hpp"

namespace ddef {

// Dense monodromy matrix on the panel dofs,
//   T = [I - S Gamma_-(0) - M(0)]^{-1} [S Gm1 + L],
// the brute-force reference pathway for every spectral claim.
struct MonodromyMatrix {
  Eigen::MatrixXd T;
  std::shared_ptr<const Mesh> mesh;
};

MonodromyMatrix discretize_T(const DiscretizedOperators &ops);

// Dense eigenvalues of T, filtered to |lambda| >= min_abs_lambda and clustered
// at relative distance cluster_tol; returns (cluster mean, cluster size).
std::vector<std::pair<Complex, int>> oracle_multipliers(const MonodromyMatrix &T_hat,
                                                        double min_abs_lambda,
                                                        double cluster_tol = 1e-6);

// Roots s of s - a - sum_j b_j exp(-s tau_j) = 0 (autonomous scalar reference),
// `count` largest-real-part ones from a grid of Newton starts; multipliers are
// exp(s).
std::vector<Complex> constant_coefficient_reference(Complex a,
                                                    const std::vector<std::pair<Complex, double>> &terms,
                                                    int count);

// Real root of f(mu) = 1 - sqrt(mu) sinh(sqrt(mu)/2) near 1.85 by Newton.
double pole_reference_single_delay_half();

} // namespace ddef

#endif
