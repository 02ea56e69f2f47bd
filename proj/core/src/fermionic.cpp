// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/fermionic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fermiflow/errors.hpp"

namespace fermiflow {
namespace {

std::int64_t ipow(int base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Tensor index of the permuted product e_{x_perm(0)} (x) ... .
struct Permutations {
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
  explicit Permutations(int p) {
    std::vector<int> v(static_cast<std::size_t>(p));
    std::iota(v.begin(), v.end(), 0);
    do {
      perms.push_back(v);
      int inv = 0;
      for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) inv += v[i] > v[j];
      signs.push_back((inv & 1) ? -1 : 1);
    } while (std::next_permutation(v.begin(), v.end()));
  }
};

void check_tensor_dim(int p, int d, Eigen::Index n) {
  if (p < 1) throw ShapeError("antisymmetrize needs p >= 1");
  if (d < 1 || ipow(d, p) != n) throw ShapeError("tensor dimension is not d^p");
}

}  // namespace

OrbitalSet::OrbitalSet(Matrix m, Scale s) : phis(std::move(m)), scale(s) {
  if (phis.cols() < 1) throw ValidationError("orbital set must contain at least one orbital");
}

Matrix OrbitalSet::density() const {
  Matrix g = phis * phis.adjoint();
  if (scale == Scale::kOrthonormal) g /= static_cast<double>(count());
  return g;
}

OrbitalSet OrbitalSet::normalized() const {
  if (scale == Scale::kNormalized) return *this;
  return OrbitalSet(phis / std::sqrt(static_cast<double>(count())), Scale::kNormalized);
}

OrbitalSet OrbitalSet::orthonormal() const {
  if (scale == Scale::kOrthonormal) return *this;
  return OrbitalSet(phis * std::sqrt(static_cast<double>(count())), Scale::kOrthonormal);
}

SectorState::SectorState(SectorBasis b, Vector c) : basis(std::move(b)), coeffs(std::move(c)) {
  if (coeffs.size() != basis.size()) throw ShapeError("coefficient vector does not match sector");
}

PSectorOperator::PSectorOperator(int d_, int p_, Matrix m) : d(d_), p(p_), matrix(std::move(m)) {
  const auto n = static_cast<Eigen::Index>(binomial(d, p));
  if (matrix.rows() != n || matrix.cols() != n) throw ShapeError("operator dimension is not C(d,p)");
}

Matrix antisymmetrizer(int p, int d) {
  const std::int64_t n = ipow(d, p);
  const Permutations perms(p);
  Matrix out = Matrix::Zero(n, n);
  std::vector<int> digits(static_cast<std::size_t>(p));
  for (std::int64_t idx = 0; idx < n; ++idx) {
    std::int64_t rest = idx;
    for (int k = p - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(rest % d);
      rest /= d;
    }
    for (std::size_t s = 0; s < perms.perms.size(); ++s) {
      std::int64_t target = 0;
      for (int k = 0; k < p; ++k) target = target * d + digits[perms.perms[s][k]];
      out(target, idx) += static_cast<double>(perms.signs[s]);
    }
  }
  return out / factorial(p);
}

Matrix antisymmetrize(int p, int d, const Matrix& t, bool sigma) {
  check_tensor_dim(p, d, t.rows());
  if (t.rows() != t.cols()) throw ShapeError("antisymmetrize expects a square operator");
  const Matrix proj = antisymmetrizer(p, d);
  Matrix out = proj * t * proj;
  if (sigma) out *= factorial(p);
  return out;
}

Vector antisymmetrize(int p, int d, const Vector& t, bool sigma) {
  check_tensor_dim(p, d, t.size());
  Vector out = antisymmetrizer(p, d) * t;
  if (sigma) out *= factorial(p);
  return out;
}

Matrix sector_embedding(int d, int p) {
  const SectorBasis basis(d, p);
  const std::int64_t n = ipow(d, p);
  const Permutations perms(p);
  const double c = 1.0 / std::sqrt(factorial(p));
  Matrix out = Matrix::Zero(n, basis.size());
  for (Eigen::Index col = 0; col < basis.size(); ++col) {
    const std::vector<int> modes = mask_modes(basis.state(col));
    for (std::size_t s = 0; s < perms.perms.size(); ++s) {
      std::int64_t target = 0;
      for (int k = 0; k < p; ++k) target = target * d + modes[perms.perms[s][k]];
      out(target, col) = c * perms.signs[s];
    }
  }
  return out;
}

SectorState slater(const OrbitalSet& phi) {
  const OrbitalSet on = phi.orthonormal();
  const int d = on.d();
  const int n = on.count();
  if (n > d) throw CapacityError("more orbitals than modes");
  const Matrix g = gram(on);
  if (max_abs(g - Matrix::Identity(n, n)) > 1e-10) throw ValidationError("orbitals are not orthonormal");
  SectorBasis basis(d, n);
  Vector coeffs(basis.size());
  Matrix sub(n, n);
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const std::vector<int> rows = mask_modes(basis.state(i));
    for (int r = 0; r < n; ++r) sub.row(r) = on.phis.row(rows[r]);
    coeffs(i) = sub.determinant();
  }
  return SectorState(std::move(basis), std::move(coeffs));
}

PSectorOperator marginal(const SectorState& psi, int p) {
  const int n = psi.basis.n();
  if (p < 1 || p > n) throw RangeError("marginal order outside [1, N]");
  return PSectorOperator(psi.basis.d(), p, reduce_state(psi.coeffs, psi.basis.d(), n, p));
}

double trace_norm(const PSectorOperator& a) { return trace_norm(a.matrix); }

Matrix gram(const OrbitalSet& phi) { return phi.phis.adjoint() * phi.phis; }

}  // namespace fermiflow
