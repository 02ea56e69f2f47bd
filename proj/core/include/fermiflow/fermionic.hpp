// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fermiflow/linalg.hpp"
#include "fermiflow/sector.hpp"

namespace fermiflow {

/// N one-particle vectors stored as the columns of a d x N matrix.
struct OrbitalSet {
  enum class Scale {
    kOrthonormal,  // Phi_N, columns orthonormal
    kNormalized,   // Psi_N = Phi_N / sqrt(N), total norm one
  };

  Matrix phis;
  Scale scale = Scale::kOrthonormal;

  OrbitalSet() = default;
  explicit OrbitalSet(Matrix m, Scale s = Scale::kOrthonormal);

  int d() const { return static_cast<int>(phis.rows()); }
  int count() const { return static_cast<int>(phis.cols()); }

  /// gamma = (1/N) sum |phi_i><phi_i| for orthonormal sets, sum |psi_i><psi_i| otherwise.
  Matrix density() const;
  OrbitalSet normalized() const;
  OrbitalSet orthonormal() const;
};

struct SectorState {
  SectorBasis basis;
  Vector coeffs;

  SectorState() = default;
  SectorState(SectorBasis b, Vector c);

  double norm() const { return coeffs.norm(); }
};

/// Operator on the p-particle antisymmetric sector of C^d.
struct PSectorOperator {
  int d = 0;
  int p = 0;
  Matrix matrix;

  PSectorOperator() = default;
  PSectorOperator(int d, int p, Matrix m);

  Eigen::Index dim() const { return matrix.rows(); }
};

/// P_- (or p! P_- when `sigma` is set) applied to an operator on (C^d)^{(x) p}.
Matrix antisymmetrize(int p, int d, const Matrix& t, bool sigma = false);
/// P_- (or p! P_-) applied to a vector of (C^d)^{(x) p}.
Vector antisymmetrize(int p, int d, const Vector& t, bool sigma = false);
/// The projector P_- itself, d^p x d^p.
Matrix antisymmetrizer(int p, int d);

/// Isometric embedding of the p-sector into (C^d)^{(x) p}.
Matrix sector_embedding(int d, int p);

/// phi_1 ^ ... ^ phi_N; coefficient on {i_1 < ... < i_N} is det(phi_k(i_j)).
SectorState slater(const OrbitalSet& phi);

/// p-particle marginal Gamma^(p) of |psi><psi|.
PSectorOperator marginal(const SectorState& psi, int p);

double trace_norm(const PSectorOperator& a);

/// Gram matrix G_ij = <phi_i, phi_j>.
Matrix gram(const OrbitalSet& phi);

}  // namespace fermiflow
