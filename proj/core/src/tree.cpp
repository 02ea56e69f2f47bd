// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/tree.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "fermiflow/dense_tree.hpp"
#include "fermiflow/errors.hpp"
#include "fermiflow/exact.hpp"
#include "fermiflow/parallel.hpp"
#include "fermiflow/quadrature.hpp"

namespace fermiflow {

void QuadratureSpec::validate() const {
  if (nodes_per_level < 2) throw ValidationError("nodes_per_level must be at least 2");
  if (K_max < 0) throw ValidationError("K_max must be non-negative");
}

TheoryConstants TheoryConstants::from(const ModeSystem& sys) {
  TheoryConstants c;
  c.kappa = sys.interaction_norm();
  c.T_report = c.kappa > 0.0 ? 1.0 / (2048.0 * std::numbers::pi * c.kappa * c.kappa)
                             : std::numeric_limits<double>::infinity();
  return c;
}

TreeContext::TreeContext(const ModeSystem& sys) : sys_(sys) {}

Eigen::Index TreeContext::dim(int m) const {
  if (m < 0 || m > sys_.d()) return 0;
  return static_cast<Eigen::Index>(binomial(sys_.d(), m));
}

const TreeContext::SectorData& TreeContext::data(int m) const {
  if (m < 0 || m > sys_.d()) throw CapacityError("sector beyond the mode count");
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = cache_[m];
  if (slot) return *slot;
  auto sd = std::make_unique<SectorData>();
  const int d = sys_.d();
  const SectorBasis basis(d, m);
  if (m == 0) {
    sd->spectrum = HermitianEigen(Matrix::Zero(1, 1));
  } else {
    sd->spectrum = HermitianEigen(onebody_sum(sys_.h(), m));
  }
  sd->pair = fermiflow::pair_energies(sys_.pair(), m);
  if (m >= 1) {
    const SectorBasis lower(d, m - 1);
    const double root = 1.0 / std::sqrt(static_cast<double>(m));
    sd->cross.resize(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < basis.size(); ++i) {
      const Mask u = basis.state(i);
      for (Mask rest = u; rest; rest &= rest - 1) {
        const int x = std::countr_zero(rest);
        const Mask r = u & ~(Mask{1} << x);
        double e = 0.0;
        for (Mask q = r; q; q &= q - 1) e += sys_.pair()(std::countr_zero(q), x);
        const double sign = (count_above(r, x) & 1) ? -1.0 : 1.0;
        sd->cross[static_cast<std::size_t>(x)].push_back({i, lower.index(r), sign * root, e});
      }
    }
  }
  slot = std::move(sd);
  return *slot;
}

const HermitianEigen& TreeContext::free_spectrum(int m) const { return data(m).spectrum; }

const RealVector& TreeContext::pair_energies(int m) const { return data(m).pair; }

Matrix TreeContext::free_evolve(const Matrix& a, int m, double t) const {
  if (t == 0.0) return a;
  return free_spectrum(m).conjugate(a, -t);
}

Matrix TreeContext::cross_step(const Matrix& y, int m) const {
  const SectorData& sd = data(m);
  const Eigen::Index n = dim(m);
  if (y.rows() != dim(m - 1) || y.cols() != dim(m - 1)) throw ShapeError("cross step: operator does not match sector");
  Matrix out = Matrix::Zero(n, n);
  for (const auto& list : sd.cross) {
    for (const CrossEntry& b : list) {
      for (const CrossEntry& a : list) {
        const double c = a.sign_over_m * b.sign_over_m * (a.energy - b.energy);
        if (c == 0.0) continue;
        out(a.full, b.full) += c * y(a.reduced, b.reduced);
      }
    }
  }
  return kI * out;
}

Matrix TreeContext::loop_step(const Matrix& g, int m) const {
  const RealVector& pe = pair_energies(m);
  if (g.rows() != pe.size() || g.cols() != pe.size()) throw ShapeError("loop step: operator does not match sector");
  Matrix out(g.rows(), g.cols());
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) out(i, j) = kI * (pe(i) - pe(j)) * g(i, j);
  return out;
}

PSectorOperator free_evolve_op(const TreeContext& ctx, const PSectorOperator& a, double t) {
  return PSectorOperator(a.d, a.p, ctx.free_evolve(a.matrix, a.p, t));
}

PSectorOperator free_evolve_op(const PSectorOperator& a, const ModeSystem& sys, double t) {
  if (a.d != sys.d()) throw ShapeError("observable does not match the mode system");
  if (t == 0.0) return a;
  const HermitianEigen e(a.p == 0 ? Matrix::Zero(1, 1) : onebody_sum(sys.h(), a.p));
  return PSectorOperator(a.d, a.p, e.conjugate(a.matrix, -t));
}

TreeOperator G_recursive(const TreeContext& ctx, const PSectorOperator& a, int k, int l, double t,
                         const std::vector<double>& times) {
  if (k < 0) throw RangeError("tree order must be non-negative");
  if (static_cast<int>(times.size()) < k) throw RangeError("fewer simplex times than the tree order");
  TreeOperator out;
  out.p = a.p;
  out.k = k;
  out.l = l;
  out.times.push_back(t);
  out.times.insert(out.times.end(), times.begin(), times.begin() + k);
  const int m = a.p + k - l;
  if (l < 0 || l > k || m > ctx.d()) {
    const Eigen::Index n = ctx.dim(m);
    out.op = PSectorOperator(a.d, std::max(m, 0), Matrix::Zero(n, n));
    return out;
  }
  if (k == 0) {
    out.op = free_evolve_op(ctx, a, t);
    return out;
  }
  const double s = times[static_cast<std::size_t>(k - 1)];
  Matrix acc = Matrix::Zero(ctx.dim(m), ctx.dim(m));
  if (l <= k - 1) {
    const TreeOperator prev = G_recursive(ctx, a, k - 1, l, t, times);
    const Matrix x = ctx.free_evolve(prev.op.matrix, m - 1, -s);
    acc += ctx.free_evolve(ctx.cross_step(x, m), m, s);
  }
  if (l >= 1) {
    const TreeOperator prev = G_recursive(ctx, a, k - 1, l - 1, t, times);
    const Matrix x = ctx.free_evolve(prev.op.matrix, m, -s);
    acc += ctx.free_evolve(ctx.loop_step(x, m), m, s);
  }
  out.op = PSectorOperator(a.d, m, std::move(acc));
  return out;
}

std::vector<PSectorOperator> integrate_tree_terms(const TreeContext& ctx, const PSectorOperator& a, int K,
                                                  double t, int nodes_per_level) {
  if (K < 0) throw RangeError("tree order must be non-negative");
  if (a.d != ctx.d()) throw ShapeError("observable does not match the mode system");
  const int p = a.p;
  std::vector<PSectorOperator> out;
  out.push_back(free_evolve_op(ctx, a, t));
  const int depth = std::min(K, ctx.d() - p);
  for (int k = 1; k <= K; ++k) {
    const Eigen::Index n = ctx.dim(p + k);
    out.emplace_back(a.d, p + k, Matrix::Zero(n, n));
  }
  if (depth < 1 || t == 0.0) return out;

  const GaussRule rule = gauss_legendre(nodes_per_level);
  const Matrix root = ctx.free_spectrum(p).to_eigenbasis(a.matrix);

  // Each operator is carried in the eigenbasis of the free Hamiltonian of its sector,
  // rotated to its own node time, so that moving to a child time is a phase.
  using Acc = std::vector<Matrix>;
  std::function<void(int, const Matrix&, double, double, Acc&)> descend =
      [&](int level, const Matrix& parent, double tau, double weight, Acc& acc) {
        const int m = p + level;
        const HermitianEigen& below = ctx.free_spectrum(m - 1);
        const HermitianEigen& here = ctx.free_spectrum(m);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double s = tau * rule.nodes[i];
          const double w = weight * tau * rule.weights[i];
          Matrix xe = parent;
          below.rotate_eigen(xe, s - tau);
          const Matrix y = ctx.cross_step(below.from_eigenbasis(xe), m);
          Matrix ye = here.to_eigenbasis(y);
          if (level < depth) descend(level + 1, ye, s, w, acc);
          here.rotate_eigen(ye, -s);
          acc[static_cast<std::size_t>(level)] += w * ye;
        }
      };

  auto task = [&](std::size_t i) -> Acc {
    Acc acc(static_cast<std::size_t>(depth + 1));
    for (int k = 1; k <= depth; ++k) acc[static_cast<std::size_t>(k)] = Matrix::Zero(ctx.dim(p + k), ctx.dim(p + k));
    const int m = p + 1;
    const HermitianEigen& below = ctx.free_spectrum(p);
    const HermitianEigen& here = ctx.free_spectrum(m);
    const double s = t * rule.nodes[i];
    const double w = t * rule.weights[i];
    Matrix xe = root;
    below.rotate_eigen(xe, s - t);
    const Matrix y = ctx.cross_step(below.from_eigenbasis(xe), m);
    Matrix ye = here.to_eigenbasis(y);
    if (depth > 1) descend(2, ye, s, w, acc);
    here.rotate_eigen(ye, -s);
    acc[1] += w * ye;
    return acc;
  };
  for (int m = p; m <= p + depth; ++m) ctx.free_spectrum(m);
  const std::vector<Acc> parts = parallel_map(rule.nodes.size(), task);
  for (int k = 1; k <= depth; ++k) {
    Matrix sum = Matrix::Zero(ctx.dim(p + k), ctx.dim(p + k));
    for (const Acc& part : parts) sum += part[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)].matrix = ctx.free_spectrum(p + k).from_eigenbasis(sum);
  }
  for (const auto& term : out)
    if (!term.matrix.allFinite()) throw DivergenceError("tree quadrature produced non-finite values");
  return out;
}

std::vector<TreeTerm> integrate_tree_terms_with_error(const TreeContext& ctx, const PSectorOperator& a, double t,
                                                      const QuadratureSpec& quad) {
  quad.validate();
  const auto base = integrate_tree_terms(ctx, a, quad.K_max, t, quad.nodes_per_level);
  const auto fine = integrate_tree_terms(ctx, a, quad.K_max, t, 2 * quad.nodes_per_level);
  std::vector<TreeTerm> out;
  for (std::size_t k = 0; k < base.size(); ++k)
    out.push_back({base[k], operator_norm(base[k].matrix - fine[k].matrix)});
  return out;
}

TreeTerm integrate_tree_term(const TreeContext& ctx, const PSectorOperator& a, int k, double t,
                             const QuadratureSpec& quad) {
  quad.validate();
  if (k > quad.K_max) throw RangeError("tree order exceeds K_max");
  const auto base = integrate_tree_terms(ctx, a, k, t, quad.nodes_per_level);
  const auto fine = integrate_tree_terms(ctx, a, k, t, 2 * quad.nodes_per_level);
  const auto kk = static_cast<std::size_t>(k);
  return {base[kk], operator_norm(base[kk].matrix - fine[kk].matrix)};
}

namespace {

int numerical_rank(const Matrix& gamma) {
  const HermitianEigen e(gamma);
  const double scale = std::max(1.0, e.values().cwiseAbs().maxCoeff());
  int r = 0;
  for (Eigen::Index i = 0; i < e.values().size(); ++i)
    if (std::abs(e.values()(i)) > 1e-12 * scale) ++r;
  return r;
}

std::complex<double> pair_with(const PSectorOperator& g, const Matrix& gamma) {
  if (g.matrix.size() == 0) return 0.0;
  return (g.matrix * quasi_free_marginal(gamma, g.p).matrix).trace();
}

}  // namespace

TreeSeries tree_series(const TreeContext& ctx, const PSectorOperator& a, const Matrix& gamma, double t,
                       const QuadratureSpec& quad, bool with_t_series) {
  quad.validate();
  const int K = quad.K_max;
  const int p = a.p;
  // gamma^(m) vanishes above the rank, so deeper levels contribute exactly zero.
  const int depth = std::min(K, numerical_rank(gamma) - p);
  TreeSeries s;
  std::vector<PSectorOperator> base, fine;
  if (depth >= 0) {
    base = integrate_tree_terms(ctx, a, depth, t, quad.nodes_per_level);
    fine = integrate_tree_terms(ctx, a, depth, t, 2 * quad.nodes_per_level);
  }
  std::complex<double> run = 0.0;
  for (int k = 0; k <= K; ++k) {
    std::complex<double> v = 0.0;
    double err = 0.0;
    if (k <= depth) {
      v = pair_with(base[static_cast<std::size_t>(k)], gamma);
      err = std::abs(v - pair_with(fine[static_cast<std::size_t>(k)], gamma));
    }
    run += v;
    s.terms.push_back(v);
    s.partial_sums.push_back(run);
    s.quad_errors.push_back(err);
  }
  if (K >= 1) {
    const double last = std::abs(s.terms[static_cast<std::size_t>(K)]);
    const double prev = std::abs(s.terms[static_cast<std::size_t>(K - 1)]);
    if (last > 1e-14 && last >= prev) {
      s.tail_warning = true;
      s.warning = "tree terms are not decreasing; t may exceed the convergence radius";
    }
  }
  if (with_t_series) {
    try {
      s.t_terms = t_series_terms(ctx.system(), a, gamma, t, quad);
      s.t_available = true;
      std::complex<double> acc = 0.0;
      for (const auto& v : s.t_terms) {
        acc += v;
        s.t_partial_sums.push_back(acc);
      }
    } catch (const CapacityError&) {
      s.t_available = false;
    }
  }
  return s;
}

GraphCount count_elementary_terms(int p, int k, int l) {
  if (p < 0 || k < 0) throw RangeError("graph count needs p, k >= 0");
  GraphCount g;
  g.p = p;
  g.k = k;
  g.l = l;
  // c[k][l]: each commutator contributes two terms, each particle-index sum its range.
  std::vector<std::vector<std::uint64_t>> c(static_cast<std::size_t>(k + 1),
                                            std::vector<std::uint64_t>(static_cast<std::size_t>(k + 1), 0));
  c[0][0] = 1;
  for (int kk = 1; kk <= k; ++kk) {
    for (int ll = 0; ll <= kk; ++ll) {
      const std::uint64_t m = static_cast<std::uint64_t>(p + kk - ll);
      std::uint64_t v = 0;
      if (ll <= kk - 1) v += 2 * (m - 1) * c[kk - 1][ll];
      if (ll >= 1) v += 2 * (m * (m - 1) / 2) * c[kk - 1][ll - 1];
      c[kk][ll] = v;
    }
  }
  g.count = (l >= 0 && l <= k) ? c[k][l] : 0;
  if (l >= 0 && l <= k) {
    g.bound = std::pow(2.0, k) * static_cast<double>(binomial(k, l)) * static_cast<double>(binomial(2 * p + 3 * k, k)) *
              std::pow(static_cast<double>(p + k - l), l);
  }
  g.aux_bound = std::pow(4.0, p) * std::pow(32.0, k);
  g.satisfied = static_cast<double>(g.count) <= g.bound && (l != 0 || static_cast<double>(g.count) <= g.aux_bound);
  return g;
}

LoopRemainder loop_remainder(const TreeContext& ctx, const PSectorOperator& a, const OrbitalSet& phi, double t,
                             const QuadratureSpec& quad, int K, bool estimate_quadrature) {
  quad.validate();
  const OrbitalSet on = phi.orthonormal();
  const int N = on.count();
  const int p = a.p;
  const ManyBodyHamiltonian h(ctx.system(), N);
  Matrix rem = heisenberg_evolve(a, h, t);
  // A_N kills everything with more than N particles.
  const int depth = std::max(0, std::min(K + 1, N - p));
  const auto terms = integrate_tree_terms(ctx, a, depth, t, quad.nodes_per_level);
  for (int k = 0; k <= std::min(K, depth); ++k) rem -= second_quantise_sector(terms[static_cast<std::size_t>(k)], N);
  LoopRemainder out;
  out.norm = operator_norm(rem);
  const SectorState s = slater(on);
  out.slater_expectation = s.coeffs.dot(rem * s.coeffs);
  if (p + K + 1 <= N) out.tail_estimate = operator_norm(second_quantise_sector(terms[static_cast<std::size_t>(K + 1)], N));
  if (estimate_quadrature) {
    const int qdepth = std::max(0, std::min(K, N - p));
    const auto fine = integrate_tree_terms(ctx, a, qdepth, t, 2 * quad.nodes_per_level);
    for (int k = 1; k <= qdepth; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      out.quad_error += operator_norm(
          second_quantise_sector(PSectorOperator(a.d, p + k, terms[kk].matrix - fine[kk].matrix), N));
    }
  }
  out.tail_dominated = out.tail_estimate < out.norm;
  if (!out.tail_dominated) out.warning = "tree tail estimate is not below the loop remainder; increase K";
  return out;
}

HfTreeGap hf_vs_tree_gap(const TreeContext& ctx, const PSectorOperator& a, const Matrix& gamma, double t,
                         const QuadratureSpec& quad, int K, const HFConfig& cfg) {
  quad.validate();
  const DensityTrajectory traj = evolve_hf_density(DensityMatrix(gamma), ctx.system(), t, cfg);
  HfTreeGap out;
  out.hf_value = (a.matrix * quasi_free_marginal(traj.states.back().gamma, a.p).matrix).trace();
  const int depth = std::min(K, numerical_rank(gamma) - a.p);
  if (depth >= 0) {
    const auto terms = integrate_tree_terms(ctx, a, depth, t, quad.nodes_per_level);
    for (const auto& g : terms) out.tree_value += pair_with(g, gamma);
  }
  out.gap = std::abs(out.hf_value - out.tree_value);
  return out;
}

}  // namespace fermiflow
