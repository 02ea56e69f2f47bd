// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fermiflow/fermionic.hpp"
#include "fermiflow/mode_system.hpp"

namespace fermiflow {

enum class Assembly {
  kCreationAnnihilation,  // sum h_kl c_k^dagger c_l plus diagonal pair energies
  kFirstQuantized,        // N lift(h) + (1/N) C(N,2) lift(W restricted to 2 particles)
};

/// H_N = sum_i h_i + (1/N) sum_{i<j} w(x_i - x_j) on the N-sector, with a cached
/// eigendecomposition.
class ManyBodyHamiltonian {
 public:
  ManyBodyHamiltonian(const ModeSystem& sys, int N, Assembly how = Assembly::kCreationAnnihilation);

  const ModeSystem& system() const { return sys_; }
  int N() const { return n_; }
  const SectorBasis& basis() const { return basis_; }
  const Matrix& matrix() const { return matrix_; }
  const HermitianEigen& spectrum() const { return eig_; }

 private:
  ModeSystem sys_;
  int n_;
  SectorBasis basis_;
  Matrix matrix_;
  HermitianEigen eig_;
};

/// e^{-itH}
class Propagator {
 public:
  Propagator(const ManyBodyHamiltonian& h, double t) : h_(&h), t_(t) {}
  double time() const { return t_; }
  Matrix matrix() const { return h_->spectrum().propagator(t_); }
  Vector apply(const Vector& v) const;

 private:
  const ManyBodyHamiltonian* h_;
  double t_;
};

ManyBodyHamiltonian build_hamiltonian(const ModeSystem& sys, int N,
                                      Assembly how = Assembly::kCreationAnnihilation);

SectorState evolve_exact(const SectorState& psi, const ManyBodyHamiltonian& h, double t);

/// Gamma_N^(p)(t) for the exactly propagated Slater state of phi.
PSectorOperator evolved_marginal(const OrbitalSet& phi, const ModeSystem& sys, double t, int p);
PSectorOperator evolved_marginal(const OrbitalSet& phi, const ManyBodyHamiltonian& h, double t, int p);

/// (p!/N^p) C(N,p) P_-(a (x) 1)P_- on the N-sector; zero when p > N.
Matrix second_quantise_sector(const PSectorOperator& a, int N);

/// e^{itH} A_N(a) e^{-itH}
Matrix heisenberg_evolve(const PSectorOperator& a, const ManyBodyHamiltonian& h, double t);

/// p! / N^p * C(N, p)
double marginal_prefactor(int N, int p);

}  // namespace fermiflow
