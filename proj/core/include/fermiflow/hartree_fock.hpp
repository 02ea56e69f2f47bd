// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "fermiflow/fermionic.hpp"
#include "fermiflow/mode_system.hpp"

namespace fermiflow {

struct HFConfig {
  double dt = 1e-3;
  /// Keep every n-th step in the trajectory (the final time is always kept).
  int record_every = 1;
};

struct DensityMatrix {
  Matrix gamma;

  DensityMatrix() = default;
  explicit DensityMatrix(Matrix g);

  int d() const { return static_cast<int>(gamma.rows()); }
};

/// gamma = kappa kappa^*
struct KappaFactor {
  Matrix kappa;

  KappaFactor() = default;
  explicit KappaFactor(Matrix k);
  /// (1/sqrt(N)) [phi_1 ... phi_N 0 ... 0], a d x d factor of the Slater density.
  static KappaFactor from_orbitals(const OrbitalSet& phi);

  Matrix density() const { return kappa * kappa.adjoint(); }
};

struct OrbitalTrajectory {
  std::vector<double> times;
  std::vector<OrbitalSet> states;
  double dt = 0.0;
  /// max_ij |Gram(t_end) - Gram(0)|
  double gram_drift = 0.0;
  /// 10 dt^4 t
  double tol_report = 0.0;
};

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  /// e^{ith} gamma(t) e^{-ith}
  std::vector<DensityMatrix> interaction;
  double dt = 0.0;
};

struct KappaTrajectory {
  std::vector<double> times;
  std::vector<KappaFactor> states;
  double dt = 0.0;
};

/// h + diag(w * rho) - (w . gamma), the self-consistent one-particle operator.
Matrix fock_operator(const Matrix& gamma, const ModeSystem& sys);

/// d/dt of each orbital: -i [h phi_i + direct - exchange] with the density of `phi`.
Matrix hf_rhs_orbitals(const OrbitalSet& phi, const ModeSystem& sys);

/// -i ([h, gamma] + tr_2 [W(1 - E), gamma (x) gamma])
Matrix hf_rhs_density(const DensityMatrix& gamma, const ModeSystem& sys);

/// -i (h kappa + tr_2(W(1 - E) kappa (x) kappa kappa^*))
Matrix hf_rhs_kappa(const KappaFactor& kappa, const ModeSystem& sys);

OrbitalTrajectory evolve_hf_orbitals(const OrbitalSet& phi, const ModeSystem& sys, double t,
                                     const HFConfig& cfg = {});
DensityTrajectory evolve_hf_density(const DensityMatrix& gamma, const ModeSystem& sys, double t,
                                    const HFConfig& cfg = {});
KappaTrajectory evolve_kappa(const KappaFactor& kappa, const ModeSystem& sys, double t,
                             const HFConfig& cfg = {});

/// gamma^(p) = gamma^{(x)p} Sigma_-^(p) on the p-sector, i.e. p! times the matrix
/// of p x p minors of gamma.
PSectorOperator quasi_free_marginal(const Matrix& gamma, int p);

struct MarginalRelation {
  /// || gamma_N^(p) - (p!/N^p) C(N,p) Gamma_N^(p) ||_1
  double identity_deviation = 0.0;
  /// || gamma_N^(p) - Gamma_N^(p) ||_1
  double asymptotic_gap = 0.0;
  /// p^2 / N
  double bound = 0.0;
};

MarginalRelation marginal_relation_check(const OrbitalSet& phi, int p);

/// sum <psi_i|h psi_i> + 1/2 sum_ij [<psi_i psi_j|W|psi_i psi_j> - <psi_i psi_j|W|psi_j psi_i>]
/// evaluated on the normalized set Psi_N.
double hf_energy(const OrbitalSet& psi, const ModeSystem& sys);

/// tr(h gamma) + 1/2 tr(W(1 - E) gamma (x) gamma)
double hf_energy(const DensityMatrix& gamma, const ModeSystem& sys);

}  // namespace fermiflow
