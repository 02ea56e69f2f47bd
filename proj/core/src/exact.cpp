// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/exact.hpp"

#include <cmath>

#include "fermiflow/errors.hpp"

namespace fermiflow {
namespace {

Matrix assemble(const ModeSystem& sys, int n, Assembly how) {
  const double inv_n = 1.0 / static_cast<double>(n);
  if (how == Assembly::kCreationAnnihilation) {
    Matrix h = onebody_sum(sys.h(), n);
    h.diagonal() += inv_n * pair_energies(sys.pair(), n).cast<cplx>();
    return h;
  }
  const int d = sys.d();
  Matrix h = static_cast<double>(n) * lift(sys.h(), d, 1, n);
  if (n >= 2) {
    const SectorBasis two(d, 2);
    Matrix w2 = Matrix::Zero(two.size(), two.size());
    // W is diagonal in the mode basis, so P_- W P_- is diagonal on the 2-sector.
    for (Eigen::Index i = 0; i < two.size(); ++i) {
      const std::vector<int> m = mask_modes(two.state(i));
      w2(i, i) = sys.pair()(m[0], m[1]);
    }
    h += inv_n * static_cast<double>(binomial(n, 2)) * lift(w2, d, 2, n);
  }
  return h;
}

}  // namespace

ManyBodyHamiltonian::ManyBodyHamiltonian(const ModeSystem& sys, int N, Assembly how)
    : sys_(sys), n_(N) {
  if (N < 1) throw RangeError("particle count must be positive");
  if (N > sys.d()) throw CapacityError("particle count exceeds mode count");
  basis_ = SectorBasis(sys.d(), N);
  matrix_ = assemble(sys, N, how);
  eig_ = HermitianEigen(matrix_);
}

Vector Propagator::apply(const Vector& v) const {
  const auto& eig = h_->spectrum();
  Vector c = eig.vectors().adjoint() * v;
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(cplx(0.0, -t_ * eig.values()(i)));
  return eig.vectors() * c;
}

ManyBodyHamiltonian build_hamiltonian(const ModeSystem& sys, int N, Assembly how) {
  return ManyBodyHamiltonian(sys, N, how);
}

SectorState evolve_exact(const SectorState& psi, const ManyBodyHamiltonian& h, double t) {
  if (!(psi.basis == h.basis())) throw ShapeError("state and Hamiltonian live on different sectors");
  return SectorState(psi.basis, Propagator(h, t).apply(psi.coeffs));
}

PSectorOperator evolved_marginal(const OrbitalSet& phi, const ManyBodyHamiltonian& h, double t, int p) {
  return marginal(evolve_exact(slater(phi), h, t), p);
}

PSectorOperator evolved_marginal(const OrbitalSet& phi, const ModeSystem& sys, double t, int p) {
  const ManyBodyHamiltonian h(sys, phi.count());
  return evolved_marginal(phi, h, t, p);
}

double marginal_prefactor(int N, int p) {
  return factorial(p) / std::pow(static_cast<double>(N), p) * static_cast<double>(binomial(N, p));
}

Matrix second_quantise_sector(const PSectorOperator& a, int N) {
  const SectorBasis target(a.d, N);
  if (a.p > N) return Matrix::Zero(target.size(), target.size());
  return marginal_prefactor(N, a.p) * lift(a.matrix, a.d, a.p, N);
}

Matrix heisenberg_evolve(const PSectorOperator& a, const ManyBodyHamiltonian& h, double t) {
  const Matrix an = second_quantise_sector(a, h.N());
  return h.spectrum().conjugate(an, -t);
}

}  // namespace fermiflow
