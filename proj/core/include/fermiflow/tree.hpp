// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fermiflow/fermionic.hpp"
#include "fermiflow/hartree_fock.hpp"
#include "fermiflow/mode_system.hpp"

namespace fermiflow {

struct QuadratureSpec {
  int nodes_per_level = 5;
  int K_max = 3;

  void validate() const;
  QuadratureSpec doubled() const { return {2 * nodes_per_level, K_max}; }
};

struct TheoryConstants {
  double kappa = 0.0;
  /// (2^11 pi kappa^2)^{-1}
  double T_report = 0.0;

  static TheoryConstants from(const ModeSystem& sys);
};

/// Pointwise value of G^(k,l) at the times (t, t_1, ..., t_k).
struct TreeOperator {
  int p = 0;
  int k = 0;
  int l = 0;
  std::vector<double> times;
  PSectorOperator op;

  int particles() const { return p + k - l; }
};

/// Sector data of one mode system shared by all tree evaluations: free spectra of
/// sum_i h_i, pair energies and the cross-pair tables of each m-sector.
class TreeContext {
 public:
  explicit TreeContext(const ModeSystem& sys);

  const ModeSystem& system() const { return sys_; }
  int d() const { return sys_.d(); }
  Eigen::Index dim(int m) const;

  const HermitianEigen& free_spectrum(int m) const;
  const RealVector& pair_energies(int m) const;

  /// e^{it sum h} a e^{-it sum h} on the m-sector.
  Matrix free_evolve(const Matrix& a, int m, double t) const;

  /// i P_- sum_{i<m} [W_{i m}, y (x) 1] P_- for y on the (m-1)-sector.
  Matrix cross_step(const Matrix& y, int m) const;

  /// i sum_{i<j<=m} [W_ij, g] for g on the m-sector.
  Matrix loop_step(const Matrix& g, int m) const;

 private:
  struct CrossEntry {
    Eigen::Index full;
    Eigen::Index reduced;
    double sign_over_m;
    double energy;
  };
  struct SectorData {
    HermitianEigen spectrum;
    RealVector pair;
    std::vector<std::vector<CrossEntry>> cross;  // per removed mode x
  };
  const SectorData& data(int m) const;

  ModeSystem sys_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<SectorData>> cache_;
};

/// a_t = e^{it sum h} a e^{-it sum h}
PSectorOperator free_evolve_op(const TreeContext& ctx, const PSectorOperator& a, double t);
PSectorOperator free_evolve_op(const PSectorOperator& a, const ModeSystem& sys, double t);

/// G^(k,l)_{t, t_1..t_k}(a); `times` holds t_1 >= ... >= t_k. Zero unless 0 <= l <= k.
TreeOperator G_recursive(const TreeContext& ctx, const PSectorOperator& a, int k, int l, double t,
                         const std::vector<double>& times);

/// Simplex integrals G^(k,0)_t(a) for k = 0..K from one nested quadrature sweep.
std::vector<PSectorOperator> integrate_tree_terms(const TreeContext& ctx, const PSectorOperator& a, int K,
                                                  double t, int nodes_per_level);

struct TreeTerm {
  PSectorOperator value;
  /// operator-norm change when nodes_per_level is doubled
  double quad_error = 0.0;
};

TreeTerm integrate_tree_term(const TreeContext& ctx, const PSectorOperator& a, int k, double t,
                             const QuadratureSpec& quad);

/// All terms k <= quad.K_max with doubling error estimates.
std::vector<TreeTerm> integrate_tree_terms_with_error(const TreeContext& ctx, const PSectorOperator& a,
                                                      double t, const QuadratureSpec& quad);

struct TreeSeries {
  /// tr(G^(k,0)_t(a) gamma^(p+k)) for k = 0..K
  std::vector<std::complex<double>> terms;
  std::vector<std::complex<double>> partial_sums;
  std::vector<double> quad_errors;
  /// Series with W(1 - E) in place of W and no intermediate projection, converging
  /// to tr(a gamma~(t)^(p)); empty when the dense tensor space exceeds capacity.
  bool t_available = false;
  std::vector<std::complex<double>> t_terms;
  std::vector<std::complex<double>> t_partial_sums;
  bool tail_warning = false;
  std::string warning;
};

TreeSeries tree_series(const TreeContext& ctx, const PSectorOperator& a, const Matrix& gamma, double t,
                       const QuadratureSpec& quad, bool with_t_series = true);

struct GraphCount {
  int p = 0;
  int k = 0;
  int l = 0;
  std::uint64_t count = 0;
  /// 2^k C(k,l) C(2p+3k,k) (p+k-l)^l
  double bound = 0.0;
  /// 4^p 32^k
  double aux_bound = 0.0;
  bool satisfied = false;
};

/// Number of summands of the fully expanded recursion for G^(k,l)(a^(p)).
GraphCount count_elementary_terms(int p, int k, int l);

struct LoopRemainder {
  /// ||e^{itH} A_N(a) e^{-itH} - sum_{k<=K} A_N(G^(k,0)_t(a))||
  double norm = 0.0;
  std::complex<double> slater_expectation;
  /// ||A_N(G^(K+1,0)_t(a))||, exactly zero when p + K + 1 > N
  double tail_estimate = 0.0;
  /// sum_k ||A_N(delta G^(k,0))|| under node doubling
  double quad_error = 0.0;
  bool tail_dominated = true;
  std::string warning;
};

LoopRemainder loop_remainder(const TreeContext& ctx, const PSectorOperator& a, const OrbitalSet& phi, double t,
                             const QuadratureSpec& quad, int K, bool estimate_quadrature = true);

struct HfTreeGap {
  double gap = 0.0;
  std::complex<double> hf_value;
  std::complex<double> tree_value;
};

/// |tr(a gamma(t)^(p)) - sum_{k<=K} tr(G^(k,0)_t(a) gamma^(p+k))| with gamma(t) from the
/// density-matrix flow.
HfTreeGap hf_vs_tree_gap(const TreeContext& ctx, const PSectorOperator& a, const Matrix& gamma, double t,
                         const QuadratureSpec& quad, int K, const HFConfig& cfg = {});

}  // namespace fermiflow
