// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fermiflow/fermionic.hpp"
#include "fermiflow/mode_system.hpp"
#include "fermiflow/tree.hpp"

namespace fermiflow {

struct DenseTreeOptions {
  /// Use W(1 - E) instead of W.
  bool exchange = true;
  /// Apply P_- after every commutator.
  bool project = false;
  /// Largest admissible d^m.
  std::int64_t max_dim = 1024;
};

/// The commutator recursion on the full tensor space (C^d)^{(x) m}. With exchange
/// and no projection it generates the T^(k) operators of the tree expansion of the
/// Hartree-Fock pairing.
class DenseTree {
 public:
  DenseTree(const ModeSystem& sys, DenseTreeOptions opt = {});

  bool fits(int particles) const;
  const DenseTreeOptions& options() const { return opt_; }

  /// sum_{i<m} V_{i m, s} with V = W or W(1 - E), free-evolved to time s.
  Matrix cross_pair(int m, double s) const;

  /// i sum_{i<m} [V_{i m, s}, x (x) 1], projected when requested.
  Matrix step(const Matrix& x, int m, double s) const;

  /// Recursion at fixed times t_1 >= ... >= t_k starting from `base` on p particles.
  Matrix pointwise(const Matrix& base, int p, const std::vector<double>& times) const;

  /// Simplex integrals of the recursion for k = 0..K (k = 0 returns `base`).
  std::vector<Matrix> integrate(const Matrix& base, int p, int K, double t, int nodes_per_level) const;

 private:
  const Matrix& static_cross(int m) const;
  const Matrix& projector(int m) const;

  ModeSystem sys_;
  DenseTreeOptions opt_;
  HermitianEigen h_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<Matrix>> cross_;
  mutable std::map<int, std::unique_ptr<Matrix>> proj_;
};

/// iota a iota^dagger on (C^d)^{(x) p}.
Matrix embed_sector_operator(const PSectorOperator& a);

/// u^{(x) m}
Matrix tensor_power(const Matrix& u, int m);

/// tr(T^(k)(a) gamma^{(x)(p+k)} (Sigma_-^(p) (x) 1)) for k = 0..K.
std::vector<std::complex<double>> t_series_terms(const ModeSystem& sys, const PSectorOperator& a,
                                                 const Matrix& gamma, double t, const QuadratureSpec& quad,
                                                 std::int64_t max_dim = 1024);

}  // namespace fermiflow
