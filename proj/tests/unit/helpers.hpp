// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Eigenvalues>

#include "fermiflow/fermiflow.hpp"
#include "oracles/oracles.hpp"

namespace testing {

using namespace fermiflow;

inline ModeSystem chain_system(int d, double g = 1.0, double tau = 0.25) {
  return ModeSystem(hopping_chain(d, tau), soft_coulomb(g));
}

inline ModeSystem free_system(int d, double tau = 0.25) {
  return ModeSystem(hopping_chain(d, tau), std::vector<double>(static_cast<std::size_t>(d), 0.0));
}

// e^{-i t A} for Hermitian A, independent of the library's eigen helper.
inline Matrix expm_herm(const Matrix& a, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector ph = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// Random Hermitian operator on the p-sector.
inline PSectorOperator random_sector_op(Rng& rng, int d, int p) {
  return PSectorOperator(d, p, rng.hermitian(static_cast<Eigen::Index>(binomial(d, p))));
}

inline double diff(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

}  // namespace testing
