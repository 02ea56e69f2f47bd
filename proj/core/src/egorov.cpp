// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/egorov.hpp"

#include "fermiflow/errors.hpp"
#include "fermiflow/fock.hpp"

namespace fermiflow {

namespace {

// Quantised flow sum_p sum_{k<=K} (G^(k,0)_t(a^(p)))^_N and the next-level tail.
void quantised_flow(const TreeContext& ctx, const GradedObservable& a, int N, double t, int nodes, int K,
                    Matrix& flow, double* tail) {
  const int d = ctx.d();
  flow = Matrix::Zero(static_cast<Eigen::Index>(binomial(d, N)), static_cast<Eigen::Index>(binomial(d, N)));
  Matrix next = Matrix::Zero(flow.rows(), flow.cols());
  for (const auto& [key, m] : a.blocks()) {
    const int p = key.first;
    // The K+1 level only feeds the tail, so skip it when no tail is asked for.
    const int depth = std::min(tail ? K + 1 : K, N - p);
    if (depth < 0) continue;
    const auto terms = integrate_tree_terms(ctx, PSectorOperator(d, p, m), depth, t, nodes);
    for (int k = 0; k <= depth; ++k) {
      const auto& g = terms[static_cast<std::size_t>(k)];
      const Matrix q = quantise_sector(GradedObservable::single(d, g.p, g.p, g.matrix), N, N);
      if (k <= K)
        flow += q;
      else
        next += q;
    }
  }
  if (tail) *tail = operator_norm(next);
}

}  // namespace

EgorovResult egorov_check(const TreeContext& ctx, const GradedObservable& a, int N, double t,
                          const QuadratureSpec& quad, int K, bool override_time_guard, bool estimate_quadrature) {
  quad.validate();
  if (a.d() != ctx.d()) throw ShapeError("observable does not match the mode system");
  if (!a.is_gauge_invariant()) throw UnsupportedError("Egorov check needs a gauge-invariant observable");
  if (N < 1 || N > ctx.d()) throw CapacityError("N must lie in [1, d]");
  if (ctx.d() > kMaxFockModes) throw CapacityError("Fock space is limited to 14 modes");
  if (K < 0) throw RangeError("tree order must be non-negative");
  check_time_guard(ctx.system(), t, override_time_guard);

  EgorovResult r;
  r.N = N;
  r.t = t;
  r.T_report = TheoryConstants::from(ctx.system()).T_report;

  const Matrix nh = static_cast<double>(N) * quantise_sector(grassmann_hamiltonian(ctx.system()), N, N);
  const HermitianEigen spec(nh);
  const Matrix an = quantise_sector(a, N, N);
  const Matrix heisenberg = spec.conjugate(an, -t);

  Matrix flow;
  quantised_flow(ctx, a, N, t, quad.nodes_per_level, K, flow, &r.tail_estimate);
  r.norm_difference = operator_norm(heisenberg - flow);
  if (estimate_quadrature && t != 0.0) {
    Matrix fine;
    quantised_flow(ctx, a, N, t, 2 * quad.nodes_per_level, K, fine, nullptr);
    r.quad_error = operator_norm(flow - fine);
  }
  return r;
}

}  // namespace fermiflow
