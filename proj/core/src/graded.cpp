// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/graded.hpp"

#include <cmath>

#include "fermiflow/errors.hpp"

namespace fermiflow {

namespace {

Eigen::Index sector_dim(int d, int p) {
  if (p < 0 || p > d) return 0;
  return static_cast<Eigen::Index>(binomial(d, p));
}

Matrix eye(int d, int p) { return Matrix::Identity(sector_dim(d, p), sector_dim(d, p)); }

int sign_power(int e) { return (e % 2 == 0) ? 1 : -1; }

// One term of the bracket: (a (x) 1^(p2-1)) (1^(q1-1) (x) b), antisymmetrized.
Matrix contract(int d, const Matrix& a, int p1, int q1, const Matrix& b, int p2, int q2) {
  Matrix x = split_map(d, q1 - 1, q2);
  x = kron(eye(d, q1 - 1), b) * x;
  x = kron(eye(d, q1 - 1), split_map(d, 1, p2 - 1)) * x;
  x = kron(split_map(d, q1 - 1, 1).transpose(), eye(d, p2 - 1)) * x;
  x = kron(a, eye(d, p2 - 1)) * x;
  return split_map(d, p1, p2 - 1).transpose() * x;
}

int numerical_rank(const Matrix& gamma) {
  const Eigen::JacobiSVD<Matrix> svd(gamma);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double tol = 1e-12 * std::max(1.0, s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return r;
}

}  // namespace

GradedBlocks::GradedBlocks(int d) : d_(d) {
  if (d < 1 || d > kMaxModes) throw RangeError("mode count outside [1, 30]");
}

void GradedBlocks::check_shape(int p, int q, const Matrix& m) const {
  if (p < 0 || q < 0 || p > d_ || q > d_) throw RangeError("block index outside [0, d]");
  if (m.rows() != sector_dim(d_, p) || m.cols() != sector_dim(d_, q))
    throw ShapeError("block does not match its sector dimensions");
}

Matrix GradedBlocks::block(int p, int q) const {
  auto it = blocks_.find({p, q});
  if (it != blocks_.end()) return it->second;
  return Matrix::Zero(sector_dim(d_, p), sector_dim(d_, q));
}

void GradedBlocks::set(int p, int q, Matrix m) {
  check_shape(p, q, m);
  blocks_[{p, q}] = std::move(m);
}

void GradedBlocks::add(int p, int q, const Matrix& m) {
  check_shape(p, q, m);
  auto it = blocks_.find({p, q});
  if (it == blocks_.end())
    blocks_.emplace(BlockKey{p, q}, m);
  else
    it->second += m;
}

std::optional<int> GradedBlocks::degree() const {
  std::optional<int> deg;
  for (const auto& [key, m] : blocks_) {
    const int g = key.first - key.second;
    if (deg && *deg != g) return std::nullopt;
    deg = g;
  }
  return deg ? deg : std::optional<int>(0);
}

bool GradedBlocks::is_gauge_invariant() const {
  for (const auto& [key, m] : blocks_)
    if (key.first != key.second && m.size() > 0 && max_abs(m) != 0.0) return false;
  return true;
}

GradedObservable GradedObservable::identity(int d) { return single(d, 0, 0, Matrix::Ones(1, 1)); }

GradedObservable GradedObservable::single(int d, int p, int q, Matrix m) {
  GradedObservable a(d);
  a.set(p, q, std::move(m));
  return a;
}

GradedObservable GradedObservable::from_sector(const PSectorOperator& a) { return single(a.d, a.p, a.p, a.matrix); }

double GradedObservable::norm_BG() const {
  double n = 0.0;
  for (const auto& [key, m] : blocks_) n += operator_norm(m);
  return n;
}

GradedObservable GradedObservable::operator+(const GradedObservable& o) const {
  if (o.d_ != d_) throw ShapeError("observables on different mode counts");
  GradedObservable r = *this;
  for (const auto& [key, m] : o.blocks_) r.add(key.first, key.second, m);
  return r;
}

GradedObservable GradedObservable::operator-(const GradedObservable& o) const { return *this + o * cplx(-1.0); }

GradedObservable GradedObservable::operator*(cplx s) const {
  GradedObservable r = *this;
  for (auto& [key, m] : r.blocks_) m *= s;
  return r;
}

double GradedState::norm_R() const {
  double n = 0.0;
  for (const auto& [key, m] : blocks_) n = std::max(n, trace_norm(m));
  return n;
}

cplx GradedState::pair(const GradedObservable& a) const {
  if (a.d() != d_) throw ShapeError("state and observable on different mode counts");
  cplx s = 0.0;
  for (const auto& [key, m] : blocks_) {
    auto it = a.blocks().find({key.second, key.first});
    if (it != a.blocks().end()) s += (m * it->second).trace();
  }
  return s;
}

GradedObservable graded_product(const GradedObservable& a, const GradedObservable& b) {
  if (a.d() != b.d()) throw ShapeError("observables on different mode counts");
  const int d = a.d();
  GradedObservable out(d);
  for (const auto& [ka, ma] : a.blocks()) {
    for (const auto& [kb, mb] : b.blocks()) {
      const auto [p1, q1] = ka;
      const auto [p2, q2] = kb;
      if (p1 + p2 > d || q1 + q2 > d) continue;
      const Matrix m = split_map(d, p1, p2).transpose() * kron(ma, mb) * split_map(d, q1, q2);
      out.add(p1 + p2, q1 + q2, static_cast<double>(sign_power(p2 * (p1 + q1))) * m);
    }
  }
  return out;
}

Matrix graded_poisson_block(int d, const Matrix& a, int p1, int q1, const Matrix& b, int p2, int q2) {
  const int P = p1 + p2 - 1;
  const int Q = q1 + q2 - 1;
  if (P < 0 || Q < 0 || P > d || Q > d) return Matrix();
  Matrix out = Matrix::Zero(sector_dim(d, P), sector_dim(d, Q));
  if (q1 >= 1 && p2 >= 1)
    out += (kI * static_cast<double>(sign_power((p2 + 1) * (p1 + q1)) * q1 * p2)) *
           contract(d, a, p1, q1, b, p2, q2);
  if (p1 >= 1 && q2 >= 1)
    out -= (kI * static_cast<double>(sign_power((q1 + 1) * (p2 + q2)) * p1 * q2)) *
           contract(d, b, p2, q2, a, p1, q1);
  return out;
}

GradedObservable graded_poisson(const GradedObservable& a, const GradedObservable& b) {
  if (a.d() != b.d()) throw ShapeError("observables on different mode counts");
  const int d = a.d();
  GradedObservable out(d);
  for (const auto& [ka, ma] : a.blocks()) {
    for (const auto& [kb, mb] : b.blocks()) {
      const Matrix m = graded_poisson_block(d, ma, ka.first, ka.second, mb, kb.first, kb.second);
      if (m.size() > 0) out.add(ka.first + kb.first - 1, ka.second + kb.second - 1, m);
    }
  }
  return out;
}

GradedState state_from_density(const Matrix& gamma, std::optional<int> max_p) {
  if (gamma.rows() != gamma.cols()) throw ShapeError("density matrix must be square");
  const int d = static_cast<int>(gamma.rows());
  const int top = max_p ? *max_p : numerical_rank(gamma);
  if (top < 0 || top > d) throw RangeError("level outside [0, d]");
  GradedState rho(d);
  rho.set(0, 0, Matrix::Ones(1, 1));
  for (int p = 1; p <= top; ++p) rho.set(p, p, quasi_free_marginal(gamma, p).matrix);
  return rho;
}

HierarchyTrajectory hierarchy_evolve(const GradedState& rho, const ModeSystem& sys, double t, const HFConfig& cfg) {
  if (rho.d() != sys.d()) throw ShapeError("state does not match the mode system");
  if (!rho.is_gauge_invariant()) throw UnsupportedError("hierarchy evolution needs a gauge-invariant state");
  if (t < 0.0) throw RangeError("time must be non-negative");
  if (cfg.dt <= 0.0 || cfg.record_every < 1) throw ValidationError("invalid integrator settings");
  const int d = sys.d();
  int top = 0;
  for (const auto& [key, m] : rho.blocks())
    if (key.first == key.second) top = std::max(top, key.first);

  std::vector<HermitianEigen> free;
  std::vector<Matrix> y;
  for (int p = 0; p <= top; ++p) {
    free.emplace_back(p == 0 ? Matrix::Zero(1, 1) : onebody_sum(sys.h(), p));
    y.push_back(rho.block(p, p));
  }
  const RealMatrix& pair = sys.pair();

  // y holds e^{isH_p} rho^(p) e^{-isH_p}.
  auto rhs = [&](double s, const std::vector<Matrix>& v) {
    std::vector<Matrix> out(v.size());
    out[static_cast<std::size_t>(top)] = Matrix::Zero(v.back().rows(), v.back().cols());
    for (int p = 0; p < top; ++p) {
      const auto up = static_cast<std::size_t>(p + 1);
      const Matrix lab = free[up].conjugate(v[up], s);
      const Matrix src = pair_partial_trace_commutator(lab, pair, p);
      out[static_cast<std::size_t>(p)] = -kI * free[static_cast<std::size_t>(p)].conjugate(src, -s);
    }
    return out;
  };
  auto axpy = [](const std::vector<Matrix>& a, double h, const std::vector<Matrix>& b) {
    std::vector<Matrix> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + h * b[i];
    return r;
  };
  auto record = [&](HierarchyTrajectory& tr, double s, const std::vector<Matrix>& v) {
    GradedState st(d);
    for (int p = 0; p <= top; ++p) st.set(p, p, free[static_cast<std::size_t>(p)].conjugate(v[static_cast<std::size_t>(p)], s));
    tr.times.push_back(s);
    tr.states.push_back(std::move(st));
  };

  const int steps = t == 0.0 ? 0 : static_cast<int>(std::ceil(t / cfg.dt - 1e-9));
  const double h = steps == 0 ? 0.0 : t / steps;
  HierarchyTrajectory tr;
  tr.dt = h;
  record(tr, 0.0, y);
  for (int n = 0; n < steps; ++n) {
    const double s = n * h;
    const auto k1 = rhs(s, y);
    const auto k2 = rhs(s + 0.5 * h, axpy(y, 0.5 * h, k1));
    const auto k3 = rhs(s + 0.5 * h, axpy(y, 0.5 * h, k2));
    const auto k4 = rhs(s + h, axpy(y, h, k3));
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!y[i].allFinite()) throw DivergenceError("hierarchy step produced non-finite values");
    }
    if ((n + 1) % cfg.record_every == 0 || n + 1 == steps) record(tr, (n + 1) * h, y);
  }
  return tr;
}

void check_time_guard(const ModeSystem& sys, double t, bool override_time_guard) {
  const TheoryConstants c = TheoryConstants::from(sys);
  if (!override_time_guard && t >= c.T_report)
    throw RangeError("t = " + std::to_string(t) + " is not below T = " + std::to_string(c.T_report) +
                     "; pass the time-guard override to continue");
}

Superflow superflow_observable(const TreeContext& ctx, const PSectorOperator& a, double t, const QuadratureSpec& quad,
                               int K, bool override_time_guard) {
  quad.validate();
  check_time_guard(ctx.system(), t, override_time_guard);
  const int top = std::min(K + 1, ctx.d() - a.p);
  const auto terms = integrate_tree_terms(ctx, a, std::max(top, 0), t, quad.nodes_per_level);
  Superflow out{GradedObservable(a.d), 0.0};
  for (int k = 0; k <= K && k <= top; ++k) {
    const auto& g = terms[static_cast<std::size_t>(k)];
    if (k == 0 || max_abs(g.matrix) > 0.0) out.observable.set(g.p, g.p, g.matrix);
  }
  if (K + 1 <= top) out.tail_estimate = operator_norm(terms[static_cast<std::size_t>(K + 1)].matrix);
  return out;
}

}  // namespace fermiflow
