// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_ERRORS_HPP
#define DDEF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ddef {

// Thrown when I - M_k(mu) turns out numerically singular, i.e. mu sits on a
// pole of the construction outside the guaranteed disk.
class RegionViolation : public std::runtime_error {
public:
  RegionViolation(double mu_abs, double guaranteed_radius)
      : std::runtime_error("I - M_k(mu) numerically singular at |mu| = " + std::to_string(mu_abs) +
                           "; construction guaranteed only for |mu| < " +
                           std::to_string(guaranteed_radius)),
        mu_abs_(mu_abs), radius_(guaranteed_radius) {}

  double mu_abs() const { return mu_abs_; }
  double guaranteed_radius() const { return radius_; }

private:
  double mu_abs_, radius_;
};

} // namespace ddef

#endif
