// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fermiflow/fermionic.hpp"
#include "fermiflow/hartree_fock.hpp"
#include "fermiflow/mode_system.hpp"
#include "fermiflow/tree.hpp"

namespace fermiflow {

using BlockKey = std::pair<int, int>;

/// Finite family of blocks (p, q), each a C(d,p) x C(d,q) matrix mapping the
/// q-sector to the p-sector.
class GradedBlocks {
 public:
  GradedBlocks() = default;
  explicit GradedBlocks(int d);

  int d() const { return d_; }
  const std::map<BlockKey, Matrix>& blocks() const { return blocks_; }
  bool empty() const { return blocks_.empty(); }

  bool has(int p, int q) const { return blocks_.count({p, q}) != 0; }
  /// The stored block, or a zero block of the right shape.
  Matrix block(int p, int q) const;
  void set(int p, int q, Matrix m);
  void add(int p, int q, const Matrix& m);

  /// Degree p - q when every block shares it. Empty counts as degree 0.
  std::optional<int> degree() const;
  bool is_gauge_invariant() const;

 protected:
  void check_shape(int p, int q, const Matrix& m) const;

  int d_ = 0;
  std::map<BlockKey, Matrix> blocks_;
};

class GradedObservable : public GradedBlocks {
 public:
  using GradedBlocks::GradedBlocks;

  static GradedObservable identity(int d);
  static GradedObservable single(int d, int p, int q, Matrix m);
  static GradedObservable from_sector(const PSectorOperator& a);

  /// sum_{p,q} ||a^(p,q)||
  double norm_BG() const;

  GradedObservable operator+(const GradedObservable& o) const;
  GradedObservable operator-(const GradedObservable& o) const;
  GradedObservable operator*(cplx s) const;
};

class GradedState : public GradedBlocks {
 public:
  using GradedBlocks::GradedBlocks;

  /// sup_{p,q} ||rho^(p,q)||_1
  double norm_R() const;
  /// <rho, a> = sum tr(rho^(p,q) a^(q,p))
  cplx pair(const GradedObservable& a) const;
};

/// (ab)^(p,q) = sum (-1)^{p2(p1+q1)} P_-(a^(p1,q1) (x) b^(p2,q2))P_-
GradedObservable graded_product(const GradedObservable& a, const GradedObservable& b);

/// Bracket of two single blocks; result maps the (q1+q2-1)-sector to the (p1+p2-1)-sector.
/// Empty when either index would be negative.
Matrix graded_poisson_block(int d, const Matrix& a, int p1, int q1, const Matrix& b, int p2, int q2);

/// Bilinear extension over all block pairs.
GradedObservable graded_poisson(const GradedObservable& a, const GradedObservable& b);

/// rho^(p,p) = gamma^(p) for p = 0..max_p, with gamma^(0) = 1. By default max_p is the
/// numerical rank of gamma, above which gamma^(p) vanishes.
GradedState state_from_density(const Matrix& gamma, std::optional<int> max_p = std::nullopt);

struct HierarchyTrajectory {
  std::vector<double> times;
  std::vector<GradedState> states;
  double dt = 0.0;
};

/// i d/dt rho^(p) = [sum h, rho^(p)] + tr_{p+1} [sum_{i<=p} W_{i,p+1}, rho^(p+1)], all levels
/// advanced together by RK4 in the interaction picture.
HierarchyTrajectory hierarchy_evolve(const GradedState& rho, const ModeSystem& sys, double t,
                                     const HFConfig& cfg = {});

struct Superflow {
  GradedObservable observable;
  /// ||G^(K+1,0)_t(a)||, zero when the next level exceeds the mode count
  double tail_estimate = 0.0;
};

/// Blocks G^(k,0)_t(a) on (p+k, p+k) for k <= K.
Superflow superflow_observable(const TreeContext& ctx, const PSectorOperator& a, double t,
                               const QuadratureSpec& quad, int K, bool override_time_guard = false);

/// Throws RangeError when t >= T_report and no override is given.
void check_time_guard(const ModeSystem& sys, double t, bool override_time_guard);

}  // namespace fermiflow
