// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef DDEF_FOURIER_HPP
#define DDEF_FOURIER_HPP

#include <Eigen/Dense>
#include <vector>

namespace ddef {

// One matrix entry as a finite real Fourier series
//   a0 + sum_j cs[j-1] cos(2 pi j t) + sn[j-1] sin(2 pi j t),
// exactly 1-periodic by construction.
struct FourierEntry {
  double a0 = 0.0;
  std::vector<double> cs;
  std::vector<double> sn;

  double eval(double t) const;
  void scale(double s);
  void axpy(double s, const FourierEntry &other);
};

class FourierMatrix {
public:
  FourierMatrix() = default;
  FourierMatrix(int rows, int cols);
  static FourierMatrix constant(const Eigen::MatrixXd &value);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  FourierEntry &entry(int i, int j) { return entries_[i * cols_ + j]; }
  const FourierEntry &entry(int i, int j) const { return entries_[i * cols_ + j]; }
  const std::vector<FourierEntry> &entries() const { return entries_; }
  std::vector<FourierEntry> &entries() { return entries_; }

  Eigen::MatrixXd eval(double t) const;
  // induced infinity norm (max abs row sum) at time t
  double norm_inf(double t) const;

  void scale(double s);
  void axpy(double s, const FourierMatrix &other);
  bool empty() const { return entries_.empty(); }

private:
  int rows_ = 0, cols_ = 0;
  std::vector<FourierEntry> entries_;
};

} // namespace ddef

#endif
