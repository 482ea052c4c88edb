// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_MODEL_HPP
#define DDEF_MODEL_HPP

#include <variant>
#include <vector>

#include "ddef/fourier.hpp"

namespace ddef {

// Point delay x(t - tau) with time-periodic coefficient matrix.
struct DiscreteDelay {
  double tau = 0.0;
  FourierMatrix coeff;
};

// Distributed term int_{theta_lo}^{theta_hi} K(t, theta) x(t - theta) dtheta,
// K polynomial in theta with FourierMatrix coefficients, reduced to weighted
// point delays by fixed Gauss-Legendre quadrature before assembly.
struct DistributedDelay {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  std::vector<FourierMatrix> kernel; // theta-power coefficients K_0 + K_1 th + ...
  int quadrature_order = 1;
};

using DelayTerm = std::variant<DiscreteDelay, DistributedDelay>;

// Linear DDE x'(t) = A(t) x(t) + sum_j B_j(t) x(t - tau_j), coefficients of
// period 1, all delays within the integer horizon m.
struct PeriodicDDE {
  int n = 1;
  int m = 1;
  FourierMatrix drift;           // A(t); may be empty (all-zero n x n)
  std::vector<DelayTerm> delays;

  void validate() const; // throws std::invalid_argument on violated invariants
  double max_delay() const;
};

struct CoefficientBounds {
  double sup_A = 0.0;       // >= max_t ||A(t)||_inf
  double sup_B_total = 0.0; // >= sum_j max_t ||B_j(t)||_inf
  double V_bar = 0.0;       // >= sup_t sum_j ||B_j(t)||_inf (total-variation bound)
};

// Gauss-Legendre rule on [-1,1].
void gauss_legendre(int order, std::vector<double> &nodes, std::vector<double> &weights);

// Time rescale t' = t/P of a system whose coefficients have period P.
PeriodicDDE rescale_to_unit_period(const PeriodicDDE &dde, double P);

CoefficientBounds compute_bounds(const PeriodicDDE &dde, int n_samples = 1024);

std::vector<DiscreteDelay> discretize_distributed(const DistributedDelay &term);

// All delay terms as point delays (distributed ones via their quadrature).
std::vector<DiscreteDelay> effective_delays(const PeriodicDDE &dde);

} // namespace ddef

#endif
