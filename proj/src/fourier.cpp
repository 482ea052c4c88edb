// Copyright (c) 2026 ddefloquet contributors
// SPDX-License-Identifier: Apache-2.0

#include "ddef/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace ddef {

double FourierEntry::eval(double t) const {
  double v = a0;
  for (std::size_t j = 0; j < cs.size(); ++j) v += cs[j] * std::cos(2.0 * M_PI * (j + 1) * t);
  for (std::size_t j = 0; j < sn.size(); ++j) v += sn[j] * std::sin(2.0 * M_PI * (j + 1) * t);
  return v;
}

void FourierEntry::scale(double s) {
  a0 *= s;
  for (auto &c : cs) c *= s;
  for (auto &c : sn) c *= s;
}

void FourierEntry::axpy(double s, const FourierEntry &other) {
  a0 += s * other.a0;
  if (other.cs.size() > cs.size()) cs.resize(other.cs.size(), 0.0);
  if (other.sn.size() > sn.size()) sn.resize(other.sn.size(), 0.0);
  for (std::size_t j = 0; j < other.cs.size(); ++j) cs[j] += s * other.cs[j];
  for (std::size_t j = 0; j < other.sn.size(); ++j) sn[j] += s * other.sn[j];
}

FourierMatrix::FourierMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("FourierMatrix: negative size");
  entries_.resize(static_cast<std::size_t>(rows) * cols);
}

FourierMatrix FourierMatrix::constant(const Eigen::MatrixXd &value) {
  FourierMatrix f(static_cast<int>(value.rows()), static_cast<int>(value.cols()));
  for (int i = 0; i < f.rows_; ++i)
    for (int j = 0; j < f.cols_; ++j) f.entry(i, j).a0 = value(i, j);
  return f;
}

Eigen::MatrixXd FourierMatrix::eval(double t) const {
  Eigen::MatrixXd out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = entry(i, j).eval(t);
  return out;
}

double FourierMatrix::norm_inf(double t) const {
  double best = 0.0;
  for (int i = 0; i < rows_; ++i) {
    double rs = 0.0;
    for (int j = 0; j < cols_; ++j) rs += std::abs(entry(i, j).eval(t));
    best = std::max(best, rs);
  }
  return best;
}

void FourierMatrix::scale(double s) {
  for (auto &e : entries_) e.scale(s);
}

void FourierMatrix::axpy(double s, const FourierMatrix &other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("FourierMatrix::axpy: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i].axpy(s, other.entries_[i]);
}

} // namespace ddef
