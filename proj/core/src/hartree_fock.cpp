// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/hartree_fock.hpp"

#include <cmath>

#include "fermiflow/errors.hpp"
#include "fermiflow/exact.hpp"

namespace fermiflow {
namespace {

// diag(w * rho) - (w . gamma)
Matrix mean_field(const Matrix& gamma, const ModeSystem& sys) {
  const RealMatrix& w = sys.pair();
  const int d = sys.d();
  Matrix v = -(w.cast<cplx>().cwiseProduct(gamma));
  const Vector rho = gamma.diagonal();
  for (int x = 0; x < d; ++x) {
    cplx s = 0.0;
    for (int y = 0; y < d; ++y) s += w(x, y) * rho(y);
    v(x, x) += s;
  }
  return v;
}

struct StepPlan {
  int steps = 0;
  double dt = 0.0;
};

StepPlan plan(double t, const HFConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ValidationError("integrator step must be positive");
  if (cfg.record_every < 1) throw ValidationError("record_every must be at least 1");
  if (t < 0.0) throw RangeError("negative evolution time");
  StepPlan p;
  if (t == 0.0) return p;
  p.steps = static_cast<int>(std::ceil(t / cfg.dt - 1e-9));
  if (p.steps < 1) p.steps = 1;
  p.dt = t / p.steps;
  return p;
}

// Classical RK4 on the interaction-picture variable; f(s, y) returns dy/ds.
template <class F, class Record>
void integrate(Matrix y, const StepPlan& p, int record_every, F&& f, Record&& record) {
  record(0.0, y);
  for (int n = 0; n < p.steps; ++n) {
    const double s = n * p.dt;
    const Matrix k1 = f(s, y);
    const Matrix k2 = f(s + 0.5 * p.dt, y + (0.5 * p.dt) * k1);
    const Matrix k3 = f(s + 0.5 * p.dt, y + (0.5 * p.dt) * k2);
    const Matrix k4 = f(s + p.dt, y + p.dt * k3);
    y += (p.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite()) throw DivergenceError("Hartree-Fock step produced non-finite values");
    if ((n + 1) % record_every == 0 || n + 1 == p.steps) record((n + 1) * p.dt, y);
  }
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix g) : gamma(std::move(g)) {
  if (gamma.rows() != gamma.cols()) throw ShapeError("density matrix must be square");
}

KappaFactor::KappaFactor(Matrix k) : kappa(std::move(k)) {
  if (kappa.rows() != kappa.cols()) throw ShapeError("kappa must be square");
}

KappaFactor KappaFactor::from_orbitals(const OrbitalSet& phi) {
  const OrbitalSet psi = phi.normalized();
  Matrix k = Matrix::Zero(psi.d(), psi.d());
  if (psi.count() > psi.d()) throw CapacityError("more orbitals than modes");
  k.leftCols(psi.count()) = psi.phis;
  return KappaFactor(std::move(k));
}

Matrix fock_operator(const Matrix& gamma, const ModeSystem& sys) { return sys.h() + mean_field(gamma, sys); }

Matrix hf_rhs_orbitals(const OrbitalSet& phi, const ModeSystem& sys) {
  return -kI * (fock_operator(phi.density(), sys) * phi.phis);
}

Matrix hf_rhs_density(const DensityMatrix& gamma, const ModeSystem& sys) {
  const Matrix f = fock_operator(gamma.gamma, sys);
  return -kI * (f * gamma.gamma - gamma.gamma * f);
}

Matrix hf_rhs_kappa(const KappaFactor& kappa, const ModeSystem& sys) {
  return -kI * (fock_operator(kappa.density(), sys) * kappa.kappa);
}

OrbitalTrajectory evolve_hf_orbitals(const OrbitalSet& phi, const ModeSystem& sys, double t, const HFConfig& cfg) {
  if (phi.d() != sys.d()) throw ShapeError("orbitals do not match the mode system");
  const StepPlan p = plan(t, cfg);
  const HermitianEigen h(sys.h());
  const double scale = phi.scale == OrbitalSet::Scale::kOrthonormal ? 1.0 / phi.count() : 1.0;
  OrbitalTrajectory out;
  out.dt = p.dt;
  auto f = [&](double s, const Matrix& y) -> Matrix {
    const Matrix u = h.propagator(s);
    const Matrix x = u * y;
    const Matrix v = mean_field(scale * x * x.adjoint(), sys);
    return -kI * (u.adjoint() * (v * x));
  };
  auto record = [&](double s, const Matrix& y) {
    out.times.push_back(s);
    out.states.emplace_back(h.propagator(s) * y, phi.scale);
  };
  integrate(phi.phis, p, cfg.record_every, f, record);
  out.gram_drift = max_abs(gram(out.states.back()) - gram(phi));
  out.tol_report = 10.0 * std::pow(p.dt, 4) * t;
  return out;
}

DensityTrajectory evolve_hf_density(const DensityMatrix& gamma, const ModeSystem& sys, double t,
                                    const HFConfig& cfg) {
  if (gamma.d() != sys.d()) throw ShapeError("density matrix does not match the mode system");
  const StepPlan p = plan(t, cfg);
  const HermitianEigen h(sys.h());
  DensityTrajectory out;
  out.dt = p.dt;
  auto f = [&](double s, const Matrix& y) -> Matrix {
    const Matrix u = h.propagator(s);
    const Matrix g = u * y * u.adjoint();
    const Matrix v = mean_field(g, sys);
    return -kI * (u.adjoint() * (v * g - g * v) * u);
  };
  auto record = [&](double s, const Matrix& y) {
    out.times.push_back(s);
    out.interaction.emplace_back(y);
    out.states.emplace_back(h.conjugate(y, s));
  };
  integrate(gamma.gamma, p, cfg.record_every, f, record);
  return out;
}

KappaTrajectory evolve_kappa(const KappaFactor& kappa, const ModeSystem& sys, double t, const HFConfig& cfg) {
  if (kappa.kappa.rows() != sys.d()) throw ShapeError("kappa does not match the mode system");
  const StepPlan p = plan(t, cfg);
  const HermitianEigen h(sys.h());
  KappaTrajectory out;
  out.dt = p.dt;
  auto f = [&](double s, const Matrix& y) -> Matrix {
    const Matrix u = h.propagator(s);
    const Matrix x = u * y;
    const Matrix v = mean_field(x * x.adjoint(), sys);
    return -kI * (u.adjoint() * (v * x));
  };
  auto record = [&](double s, const Matrix& y) {
    out.times.push_back(s);
    out.states.emplace_back(h.propagator(s) * y);
  };
  integrate(kappa.kappa, p, cfg.record_every, f, record);
  return out;
}

PSectorOperator quasi_free_marginal(const Matrix& gamma, int p) {
  if (p < 1) throw RangeError("quasi-free marginal needs p >= 1");
  const int d = static_cast<int>(gamma.rows());
  const SectorBasis basis(d, p);
  const double pf = factorial(p);
  Matrix out(basis.size(), basis.size());
  Matrix sub(p, p);
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const std::vector<int> r = mask_modes(basis.state(i));
    for (Eigen::Index j = 0; j < basis.size(); ++j) {
      const std::vector<int> c = mask_modes(basis.state(j));
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) sub(a, b) = gamma(r[a], c[b]);
      out(i, j) = pf * sub.determinant();
    }
  }
  return PSectorOperator(d, p, std::move(out));
}

MarginalRelation marginal_relation_check(const OrbitalSet& phi, int p) {
  const OrbitalSet on = phi.orthonormal();
  const int n = on.count();
  if (p < 1 || p > n) throw RangeError("marginal order outside [1, N]");
  const PSectorOperator gq = quasi_free_marginal(on.density(), p);
  const PSectorOperator gs = marginal(slater(on), p);
  MarginalRelation r;
  r.identity_deviation = trace_norm(gq.matrix - marginal_prefactor(n, p) * gs.matrix);
  r.asymptotic_gap = trace_norm(gq.matrix - gs.matrix);
  r.bound = static_cast<double>(p * p) / n;
  return r;
}

double hf_energy(const OrbitalSet& set, const ModeSystem& sys) {
  const OrbitalSet psi = set.normalized();
  const RealMatrix& w = sys.pair();
  const int d = psi.d();
  const int n = psi.count();
  cplx e = 0.0;
  for (int i = 0; i < n; ++i) e += psi.phis.col(i).dot(sys.h() * psi.phis.col(i));
  cplx inter = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) {
          const cplx pix = psi.phis(x, i), pjy = psi.phis(y, j);
          const cplx direct = std::conj(pix) * std::conj(pjy) * pix * pjy;
          const cplx exchange = std::conj(pix) * std::conj(pjy) * psi.phis(x, j) * psi.phis(y, i);
          inter += w(x, y) * (direct - exchange);
        }
  e += 0.5 * inter;
  return e.real();
}

double hf_energy(const DensityMatrix& gamma, const ModeSystem& sys) {
  const Matrix& g = gamma.gamma;
  const RealMatrix& w = sys.pair();
  const int d = sys.d();
  cplx e = (sys.h() * g).trace();
  cplx inter = 0.0;
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) inter += w(x, y) * (g(x, x) * g(y, y) - g(x, y) * g(y, x));
  e += 0.5 * inter;
  return e.real();
}

}  // namespace fermiflow
