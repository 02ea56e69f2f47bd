// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/fock.hpp"

#include <cmath>

#include "fermiflow/errors.hpp"

namespace fermiflow {

namespace {

Mask bit(int x) { return Mask{1} << x; }

// a_{t_1} ... a_{t_q} |v>, t ascending; returns 0 when some t_j is empty.
int annihilate_sign(Mask v, const std::vector<int>& t) {
  int s = 1;
  for (auto it = t.rbegin(); it != t.rend(); ++it) {
    if (!(v & bit(*it))) return 0;
    if (count_below(v, *it) & 1) s = -s;
    v &= ~bit(*it);
  }
  return s;
}

// a*_{s_p} ... a*_{s_1} |v>, s ascending.
int create_sign(Mask v, const std::vector<int>& s) {
  int sg = 1;
  for (int x : s) {
    if (v & bit(x)) return 0;
    if (count_below(v, x) & 1) sg = -sg;
    v |= bit(x);
  }
  return sg;
}

template <class F>
void for_each_subset(const std::vector<int>& modes, int k, F&& f) {
  const int n = static_cast<int>(modes.size());
  if (k > n || k < 0) return;
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::vector<int> chosen(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    Mask m = 0;
    for (int i = 0; i < k; ++i) {
      chosen[static_cast<std::size_t>(i)] = modes[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
      m |= bit(chosen[static_cast<std::size_t>(i)]);
    }
    f(m, chosen);
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
}

double block_scale(int N, int p, int q) {
  return std::sqrt(factorial(p) * factorial(q)) / std::pow(static_cast<double>(N), 0.5 * (p + q));
}

// Calls f(source, target, value) for every matrix element of block (p,q) acting on `source`.
template <class F>
void apply_block(int d, const Matrix& a, int p, int q, double scale, Mask v, F&& f) {
  const std::vector<int> occupied = mask_modes(v);
  for_each_subset(occupied, q, [&](Mask tm, const std::vector<int>& t) {
    const int st = annihilate_sign(v, t);
    const Mask r = v & ~tm;
    const Eigen::Index col = q == 0 ? 0 : subset_rank(tm);
    std::vector<int> empty;
    for (int x = 0; x < d; ++x)
      if (!(r & bit(x))) empty.push_back(x);
    for_each_subset(empty, p, [&](Mask sm, const std::vector<int>& s) {
      const cplx val = a(p == 0 ? 0 : subset_rank(sm), col);
      if (val == 0.0) return;
      const int ss = create_sign(r, s);
      f(r | sm, scale * static_cast<double>(st * ss) * val);
    });
  });
}

}  // namespace

FockContext::FockContext(int d, int N) : d_(d), n_(N) {
  if (d < 1 || d > kMaxFockModes) throw CapacityError("Fock space is limited to 14 modes");
  if (N < 1) throw RangeError("deformation parameter must be positive");
  const Eigen::Index n = dim();
  for (int x = 0; x < d; ++x) {
    std::vector<Eigen::Triplet<cplx>> trip;
    for (Eigen::Index v = 0; v < n; ++v) {
      const Mask m = static_cast<Mask>(v);
      if (m & bit(x)) continue;
      trip.emplace_back(static_cast<Eigen::Index>(m | bit(x)), v, (count_below(m, x) & 1) ? -1.0 : 1.0);
    }
    SparseMatrix c(n, n);
    c.setFromTriplets(trip.begin(), trip.end());
    annihilate_.push_back(c.adjoint());
    create_.push_back(std::move(c));
  }
}

SparseMatrix FockContext::field(int x) const { return annihilation(x) / std::sqrt(static_cast<double>(n_)); }

SparseMatrix FockContext::field_adjoint(int x) const { return creation(x) / std::sqrt(static_cast<double>(n_)); }

double FockContext::car_residual() const {
  double worst = 0.0;
  for (int x = 0; x < d_; ++x) {
    for (int y = 0; y < d_; ++y) {
      const SparseMatrix f = field(x);
      const SparseMatrix g = field_adjoint(y);
      SparseMatrix ac = f * g + g * f;
      Matrix dense = Matrix(ac);
      if (x == y) dense.diagonal().array() -= 1.0 / n_;
      worst = std::max(worst, max_abs(dense));
    }
  }
  return worst;
}

std::vector<Eigen::Index> FockContext::sector_indices(int n) const {
  const SectorBasis b(d_, n);
  std::vector<Eigen::Index> out;
  for (Mask m : b.states()) out.push_back(static_cast<Eigen::Index>(m));
  return out;
}

Matrix FockContext::sector_block(const SparseMatrix& op, int from_n, int to_n) const {
  if (op.rows() != dim() || op.cols() != dim()) throw ShapeError("operator does not act on this Fock space");
  const auto cols = sector_indices(from_n);
  const auto rows = sector_indices(to_n);
  std::vector<Eigen::Index> where(static_cast<std::size_t>(dim()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) where[static_cast<std::size_t>(rows[i])] = static_cast<Eigen::Index>(i);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (SparseMatrix::InnerIterator it(op, cols[j]); it; ++it) {
      const Eigen::Index i = where[static_cast<std::size_t>(it.row())];
      if (i >= 0) out(i, static_cast<Eigen::Index>(j)) += it.value();
    }
  }
  return out;
}

SparseMatrix quantise(const GradedObservable& a, const FockContext& ctx) {
  if (a.d() != ctx.d()) throw ShapeError("observable does not match the Fock space");
  const Eigen::Index n = ctx.dim();
  std::vector<Eigen::Triplet<cplx>> trip;
  for (const auto& [key, m] : a.blocks()) {
    const auto [p, q] = key;
    const double scale = block_scale(ctx.N(), p, q);
    for (Eigen::Index v = 0; v < n; ++v) {
      apply_block(ctx.d(), m, p, q, scale, static_cast<Mask>(v),
                  [&](Mask to, cplx val) { trip.emplace_back(static_cast<Eigen::Index>(to), v, val); });
    }
  }
  SparseMatrix out(n, n);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Matrix quantise_sector(const GradedObservable& a, int N, int n) {
  const auto deg = a.degree();
  if (!deg) throw ValidationError("sector quantisation needs a homogeneous observable");
  const int d = a.d();
  if (N < 1) throw RangeError("deformation parameter must be positive");
  if (n < 0 || n > d) throw RangeError("sector outside [0, d]");
  const int target = n + *deg;
  const SectorBasis from(d, n);
  if (target < 0 || target > d) return Matrix::Zero(0, from.size());
  const SectorBasis to(d, target);
  Matrix out = Matrix::Zero(to.size(), from.size());
  for (const auto& [key, m] : a.blocks()) {
    const auto [p, q] = key;
    if (q > n) continue;
    const double scale = block_scale(N, p, q);
    for (Eigen::Index j = 0; j < from.size(); ++j) {
      apply_block(d, m, p, q, scale, from.state(j), [&](Mask t, cplx val) { out(subset_rank(t), j) += val; });
    }
  }
  return out;
}

GradedObservable grassmann_hamiltonian(const ModeSystem& sys) {
  GradedObservable h(sys.d());
  h.set(1, 1, sys.h());
  if (sys.d() >= 2) {
    const RealVector e = pair_energies(sys.pair(), 2);
    h.set(2, 2, (0.5 * e).cast<cplx>().asDiagonal().toDenseMatrix());
  }
  return h;
}

DeformationResult deformation_check(const GradedObservable& a, const GradedObservable& b, const FockContext& ctx) {
  if (a.d() != ctx.d() || b.d() != ctx.d()) throw ShapeError("observables do not match the Fock space");
  const auto da = a.degree();
  const auto db = b.degree();
  if (!da || !db) throw ValidationError("deformation check needs homogeneous observables");
  const int N = ctx.N();
  const int d = ctx.d();
  const int top = N + *da + *db;
  DeformationResult r;
  r.N = N;
  if (N > d || top < 0 || top > d) return r;
  auto q = [&](const GradedObservable& x, int from) -> Matrix {
    const auto g = x.degree();
    const int to = from + g.value_or(0);
    if (from < 0 || from > d || to < 0 || to > d)
      return Matrix::Zero(to < 0 || to > d ? 0 : static_cast<Eigen::Index>(binomial(d, to)),
                          from < 0 || from > d ? 0 : static_cast<Eigen::Index>(binomial(d, from)));
    return quantise_sector(x, N, from);
  };
  const Matrix ab = q(a, N + *db) * q(b, N);
  const Matrix ba = q(b, N + *da) * q(a, N);
  const GradedObservable br = graded_poisson(a, b);
  Matrix c = Matrix::Zero(ab.rows(), ab.cols());
  if (!br.empty()) c = q(br, N) / (kI * static_cast<double>(N));
  r.product_scale = operator_norm(q(a, N)) * operator_norm(q(b, N));
  r.commutator_norm = operator_norm(ab - ba);
  r.anticommutator_norm = operator_norm(ab + ba);
  r.commutator_residual = operator_norm(ab - ba - c);
  r.anticommutator_residual = operator_norm(ab + ba - c);
  return r;
}

DeformationSweep deformation_sweep(const GradedObservable& a, const GradedObservable& b, const std::vector<int>& Ns) {
  DeformationSweep s;
  std::vector<double> xs, rc, ra, qc, qa;
  const double floor = 1e-300;
  bool exact_c = true, exact_a = true;
  for (int N : Ns) {
    const FockContext ctx(a.d(), N);
    const DeformationResult r = deformation_check(a, b, ctx);
    s.points.push_back(r);
    const double scale = std::max(r.product_scale, floor);
    exact_c = exact_c && r.commutator_residual <= 1e-12 * scale;
    exact_a = exact_a && r.anticommutator_residual <= 1e-12 * scale;
    xs.push_back(N);
    rc.push_back(std::max(r.commutator_residual, floor));
    ra.push_back(std::max(r.anticommutator_residual, floor));
    qc.push_back(std::max(r.commutator_residual, floor) / scale);
    qa.push_back(std::max(r.anticommutator_residual, floor) / scale);
  }
  s.commutator_slope = loglog_slope(xs, rc);
  s.anticommutator_slope = loglog_slope(xs, ra);
  s.commutator_relative_slope = loglog_slope(xs, qc);
  s.anticommutator_relative_slope = loglog_slope(xs, qa);
  // Near half filling at fixed d every quantised norm shrinks, so a raw slope alone can
  // flatter the wrong bracket; the relative slope must also be clearly negative.
  const bool com = exact_c || (s.commutator_slope <= -1.6 && s.commutator_relative_slope <= -0.5);
  const bool anti = exact_a || (s.anticommutator_slope <= -1.6 && s.anticommutator_relative_slope <= -0.5);
  if (com && (!anti || exact_c || s.commutator_relative_slope <= s.anticommutator_relative_slope))
    s.bracket = "commutator";
  else if (anti)
    s.bracket = "anticommutator";
  else
    s.bracket = "none";
  return s;
}

}  // namespace fermiflow
