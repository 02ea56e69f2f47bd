// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "fermiflow/linalg.hpp"

namespace fermiflow {

using Mask = std::uint32_t;

inline constexpr int kMaxModes = 30;

std::uint64_t binomial(int n, int k);
double factorial(int n);

inline int popcount(Mask m) { return std::popcount(m); }

/// Number of elements of `set` strictly greater than x.
inline int count_above(Mask set, int x) {
  return std::popcount(set & ~((Mask{2} << x) - 1));
}

/// Number of elements of `set` strictly below x.
inline int count_below(Mask set, int x) {
  return std::popcount(set & ((Mask{1} << x) - 1));
}

/// Sign of the permutation sorting (a sorted, b sorted) into ascending order.
inline int merge_sign(Mask a, Mask b) {
  int inv = 0;
  for (Mask rest = b; rest; rest &= rest - 1) inv += count_above(a, std::countr_zero(rest));
  return (inv & 1) ? -1 : 1;
}

std::vector<int> mask_modes(Mask m);

/// All n-element subsets of {0..d-1}, in increasing bitmask order.
class SectorBasis {
 public:
  SectorBasis() = default;
  SectorBasis(int d, int n);

  int d() const { return d_; }
  int n() const { return n_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(states_.size()); }
  Mask state(Eigen::Index i) const { return states_[static_cast<std::size_t>(i)]; }
  const std::vector<Mask>& states() const { return states_; }

  /// Position of a subset in the enumeration (colex rank), -1 if not in the sector.
  Eigen::Index index(Mask m) const;

  bool operator==(const SectorBasis& o) const { return d_ == o.d_ && n_ == o.n_; }

 private:
  int d_ = 0;
  int n_ = 0;
  std::vector<Mask> states_;
};

/// Colex rank of an n-subset; equals its index in increasing bitmask order.
Eigen::Index subset_rank(Mask m);

/// Isometric inclusion of the (r+s)-sector into the tensor product of the r- and
/// s-sectors; row index = rank(A) * C(d,s) + rank(B).
Matrix split_map(int d, int r, int s);

/// P_-(a (x) 1)P_- on the n-sector for a on the r-sector.
Matrix lift(const Matrix& a, int d, int r, int n);

/// sum_i h_i on the n-sector, assembled from creation/annihilation actions.
Matrix onebody_sum(const Matrix& h, int n);

/// sum_{i<j} w(x_i - x_j) for every state of the n-sector; pair(x, y) = w(x - y).
RealVector pair_energies(const RealMatrix& pair, int n);

/// Partial trace of |psi><psi| over the last N-p particles, as an operator on the
/// p-sector.
Matrix reduce_state(const Vector& psi, int d, int N, int p);

/// tr_{p+1} [ sum_{i<=p} W_{i,p+1}, rho ] for rho on the (p+1)-sector.
Matrix pair_partial_trace_commutator(const Matrix& rho, const RealMatrix& pair, int p);

}  // namespace fermiflow
