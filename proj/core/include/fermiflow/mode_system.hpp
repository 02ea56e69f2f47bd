// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fermiflow/linalg.hpp"

namespace fermiflow {

/// One-particle model: d lattice modes, Hermitian h, even pair potential w(x - y).
class ModeSystem {
 public:
  ModeSystem(Matrix h, std::function<double(int)> w);
  ModeSystem(Matrix h, std::vector<double> w_table);

  int d() const { return d_; }
  const Matrix& h() const { return h_; }

  /// w(m) for |m| < d.
  double w(int m) const;
  /// w on non-negative distances, w_table()[m] = w(m).
  const std::vector<double>& w_table() const { return w_; }

  /// d x d matrix pair(x, y) = w(x - y).
  const RealMatrix& pair() const { return pair_; }

  /// W on C^d (x) C^d, diagonal with entries w(x - y); index x * d + y.
  Matrix pair_operator() const;
  /// W (1 - E) with E the swap.
  Matrix exchange_pair_operator() const;
  /// ||W||, used as the interaction constant kappa.
  double interaction_norm() const;
  bool interacting() const;

  ModeSystem with_h(Matrix h) const;
  ModeSystem without_interaction() const;

 private:
  void validate();

  int d_ = 0;
  Matrix h_;
  std::vector<double> w_;
  RealMatrix pair_;
};

/// Swap operator E on C^d (x) C^d.
Matrix swap_operator(int d);

/// Nearest-neighbour chain tau (2 - S - S^dagger), open boundary.
Matrix hopping_chain(int d, double tau);

/// Chain plus an attractive diagonal well -depth / (|x - c| + 1) centred on the chain.
Matrix molecule_chain(int d, double tau, double depth);

/// w(m) = g / (|m| + 1)
std::function<double(int)> soft_coulomb(double g);

}  // namespace fermiflow
