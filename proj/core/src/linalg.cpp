// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace fermiflow {

double trace_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, max_abs(a));
  return max_abs(a - a.adjoint()) <= rel_tol * scale;
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

HermitianEigen::HermitianEigen(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

Matrix HermitianEigen::propagator(double s) const {
  Vector phase(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i)
    phase(i) = std::exp(cplx(0.0, -s * values_(i)));
  return vectors_ * phase.asDiagonal() * vectors_.adjoint();
}

Matrix HermitianEigen::conjugate(const Matrix& x, double s) const {
  if (s == 0.0) return x;
  Matrix xe = to_eigenbasis(x);
  rotate_eigen(xe, s);
  return from_eigenbasis(xe);
}

Matrix HermitianEigen::to_eigenbasis(const Matrix& x) const {
  Matrix tmp = x * vectors_;
  return vectors_.adjoint() * tmp;
}

Matrix HermitianEigen::from_eigenbasis(const Matrix& x) const {
  Matrix tmp = vectors_ * x;
  return tmp * vectors_.adjoint();
}

void HermitianEigen::rotate_eigen(Matrix& x, double s) const {
  const Eigen::Index n = values_.size();
  Vector left(n), right(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    left(i) = std::exp(cplx(0.0, -s * values_(i)));
    right(i) = std::conj(left(i));
  }
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) *= left(i) * right(j);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return cplx(re, im) / std::sqrt(2.0);
}

Matrix Rng::gaussian(Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
  return m;
}

Matrix Rng::orthonormal(Eigen::Index rows, Eigen::Index cols) {
  Matrix g = gaussian(rows, cols);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix Rng::hermitian(Eigen::Index n) {
  Matrix g = gaussian(n, n);
  Matrix h = 0.5 * (g + g.adjoint());
  return h / operator_norm(h);
}

Matrix Rng::density_matrix(Eigen::Index n) {
  Matrix g = gaussian(n, n);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace fermiflow
