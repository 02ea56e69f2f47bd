// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "fermiflow/graded.hpp"
#include "fermiflow/mode_system.hpp"

namespace fermiflow {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

inline constexpr int kMaxFockModes = 14;

/// Fermionic Fock space of d modes; basis states are bitmasks, mode x is bit x and
/// a*_x |S> = (-1)^{#{s in S : s < x}} |S + x>.
class FockContext {
 public:
  /// N is the deformation parameter; fields are a^#/sqrt(N).
  FockContext(int d, int N);

  int d() const { return d_; }
  int N() const { return n_; }
  Eigen::Index dim() const { return Eigen::Index{1} << d_; }

  const SparseMatrix& creation(int x) const { return create_[static_cast<std::size_t>(x)]; }
  const SparseMatrix& annihilation(int x) const { return annihilate_[static_cast<std::size_t>(x)]; }
  SparseMatrix field(int x) const;
  SparseMatrix field_adjoint(int x) const;

  /// max_{x,y} ||{psi_N(x), psi_N*(y)} - delta_xy / N||
  double car_residual() const;

  /// Fock indices of the n-particle states, in sector order.
  std::vector<Eigen::Index> sector_indices(int n) const;

  /// Block of a Fock operator from the n-sector to the m-sector.
  Matrix sector_block(const SparseMatrix& op, int from_n, int to_n) const;

 private:
  int d_;
  int n_;
  std::vector<SparseMatrix> create_;
  std::vector<SparseMatrix> annihilate_;
};

/// Wick quantisation: block (p,q) -> N^{-(p+q)/2} sqrt(p! q!) sum a_ST C*_S C_T with
/// C*_S = a*_{s_p} ... a*_{s_1} and C_T = a_{t_1} ... a_{t_q}.
SparseMatrix quantise(const GradedObservable& a, const FockContext& ctx);

/// The quantised operator restricted to the n-sector, as a map into the (n + deg)-sector.
/// Needs a homogeneous observable; built directly on the two sectors.
Matrix quantise_sector(const GradedObservable& a, int N, int n);

/// H = <psi, h psi> + 1/2 sum w(x - y) psibar(y) psibar(x) psi(x) psi(y): blocks (1,1) = h and
/// (2,2) = pair energies / 2.
GradedObservable grassmann_hamiltonian(const ModeSystem& sys);

struct DeformationResult {
  int N = 0;
  /// ||[A, B] - (1/(iN)) {a,b}^_N|| on the N-sector
  double commutator_residual = 0.0;
  double anticommutator_residual = 0.0;
  double commutator_norm = 0.0;
  double anticommutator_norm = 0.0;
  /// ||A|| ||B|| on the N-sector, the natural size of either bracket.
  double product_scale = 0.0;
};

DeformationResult deformation_check(const GradedObservable& a, const GradedObservable& b, const FockContext& ctx);

struct DeformationSweep {
  std::vector<DeformationResult> points;
  double commutator_slope = 0.0;
  double anticommutator_slope = 0.0;
  /// slopes of residual / product_scale
  double commutator_relative_slope = 0.0;
  double anticommutator_relative_slope = 0.0;
  /// "commutator", "anticommutator" or "none": the bracket whose residual falls like N^-2
  /// while also vanishing relative to ||A|| ||B||. A residual at rounding level counts as exact.
  std::string bracket;
};

DeformationSweep deformation_sweep(const GradedObservable& a, const GradedObservable& b, const std::vector<int>& Ns);

}  // namespace fermiflow
