// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace fermiflow {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr cplx kI{0.0, 1.0};

/// Sum of singular values.
double trace_norm(const Matrix& a);

/// Largest singular value.
double operator_norm(const Matrix& a);

/// max_ij |a_ij|
double max_abs(const Matrix& a);

bool is_hermitian(const Matrix& a, double rel_tol = 1e-13);

bool all_finite(const Matrix& a);

/// Kronecker product a (x) b, row index = i_a * rows(b) + i_b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Spectral data of a Hermitian matrix with helpers for e^{-i s A}.
class HermitianEigen {
 public:
  HermitianEigen() = default;
  explicit HermitianEigen(const Matrix& a);

  const RealVector& values() const { return values_; }
  const Matrix& vectors() const { return vectors_; }
  Eigen::Index size() const { return values_.size(); }

  /// e^{-i s A}
  Matrix propagator(double s) const;

  /// e^{-i s A} X e^{+i s A}
  Matrix conjugate(const Matrix& x, double s) const;

  /// Change to and from the eigenbasis: V^dagger X V and V X V^dagger.
  Matrix to_eigenbasis(const Matrix& x) const;
  Matrix from_eigenbasis(const Matrix& x) const;

  /// In eigenbasis representation, apply X_ab -> X_ab e^{-i s (E_a - E_b)} in place.
  void rotate_eigen(Matrix& x_eig, double s) const;

 private:
  RealVector values_;
  Matrix vectors_;
};

/// Deterministic random source used across the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  cplx complex_normal();

  /// Gaussian matrix with complex entries of unit variance.
  Matrix gaussian(Eigen::Index rows, Eigen::Index cols);
  /// Columns orthonormal: QR of a Gaussian matrix with phase fix.
  Matrix orthonormal(Eigen::Index rows, Eigen::Index cols);
  /// Hermitian matrix normalized to operator norm 1.
  Matrix hermitian(Eigen::Index n);
  /// Positive matrix of trace one.
  Matrix density_matrix(Eigen::Index n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace fermiflow
