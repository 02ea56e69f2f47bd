// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"

using namespace testing;

namespace {

// Dense pieces built from the oracle only.
struct Dense {
  int d;
  Matrix h;
  Matrix v;  // W on C^d (x) C^d

  Matrix free_h(int m) const { return oracle::hamiltonian(h, std::vector<double>(d, 0.0), m, 0.0); }

  // sum_{i<m} W_{i m} at time s, m counted from 1.
  Matrix cross(int m, double s) const {
    Matrix w = Matrix::Zero(oracle::ipow(d, m), oracle::ipow(d, m));
    for (int i = 0; i < m - 1; ++i) w += oracle::two_body(v, d, m, i, m - 1);
    const Matrix hm = free_h(m);
    return expm_herm(hm, -s) * w * expm_herm(hm, s);
  }

  Matrix loops(int m, double s) const {
    Matrix w = Matrix::Zero(oracle::ipow(d, m), oracle::ipow(d, m));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) w += oracle::two_body(v, d, m, i, j);
    const Matrix hm = free_h(m);
    return expm_herm(hm, -s) * w * expm_herm(hm, s);
  }

  // i P_-[c, x (x) 1]P_- with x on m-1 factors.
  Matrix grow(const Matrix& x, int m, double s) const {
    const Matrix c = cross(m, s);
    const Matrix xe = oracle::pad(x, d, m - 1, m);
    const Matrix p = oracle::antisymmetrizer(d, m);
    return kI * p * (c * xe - xe * c) * p;
  }

  Matrix loop(const Matrix& x, int m, double s) const {
    const Matrix c = loops(m, s);
    const Matrix p = oracle::antisymmetrizer(d, m);
    return kI * p * (c * x - x * c) * p;
  }
};

Matrix to_sector(const Matrix& dense, int d, int m) {
  const Matrix e = oracle::embedding(d, m);
  return e.adjoint() * dense * e;
}

Matrix from_sector(const Matrix& op, int d, int m) {
  const Matrix e = oracle::embedding(d, m);
  return e * op * e.adjoint();
}

}  // namespace

TEST_SUITE("tree") {
  TEST_CASE("Gauss-Legendre and simplex rules") {
    for (int n : {2, 3, 5, 8}) {
      const GaussRule g = gauss_legendre(n);
      for (int deg = 0; deg < 2 * n; ++deg) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], deg);
        CHECK(s == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
      }
    }
    const double t = 0.7;
    for (int k = 0; k <= 4; ++k) {
      const auto pts = simplex_rule(k, t, 4);
      double vol = 0.0;
      for (const auto& p : pts) {
        vol += p.weight;
        for (int i = 1; i < k; ++i) CHECK(p.times[static_cast<std::size_t>(i)] < p.times[static_cast<std::size_t>(i - 1)]);
      }
      CHECK(vol == doctest::Approx(std::pow(t, k) / std::tgamma(k + 1.0)).epsilon(1e-13));
    }
    // Nested rule integrates t_1 t_2^2 over the 2-simplex: t^5 / 15.
    double s = 0.0;
    for (const auto& p : simplex_rule(2, t, 3)) s += p.weight * p.times[0] * p.times[1] * p.times[1];
    CHECK(s == doctest::Approx(std::pow(t, 5) / 15.0).epsilon(1e-13));
  }

  TEST_CASE("free evolution of observables") {
    Rng rng(41);
    const int d = 5;
    const ModeSystem sys = chain_system(d);
    const TreeContext ctx(sys);
    const PSectorOperator a = random_sector_op(rng, d, 2);
    CHECK(diff(free_evolve_op(ctx, a, 0.0).matrix, a.matrix) == 0.0);
    const PSectorOperator id(d, 2, Matrix::Identity(10, 10));
    CHECK(diff(free_evolve_op(ctx, id, 1.3).matrix, id.matrix) < 1e-13);
    const PSectorOperator at = free_evolve_op(ctx, a, 0.9);
    CHECK(operator_norm(at.matrix) == doctest::Approx(operator_norm(a.matrix)).epsilon(1e-12));
    CHECK(diff(at.matrix, free_evolve_op(a, sys, 0.9).matrix) < 1e-13);
    const Dense D{d, sys.h(), sys.pair_operator()};
    const Matrix hd = D.free_h(2);
    const Matrix dense = expm_herm(hd, -0.9) * from_sector(a.matrix, d, 2) * expm_herm(hd, 0.9);
    CHECK(diff(at.matrix, to_sector(dense, d, 2)) < 1e-13);
  }

  TEST_CASE("cross and loop steps against dense commutators") {
    Rng rng(42);
    const int d = 5;
    const ModeSystem sys = chain_system(d);
    const TreeContext ctx(sys);
    const Dense D{d, sys.h(), sys.pair_operator()};
    for (int m = 1; m <= 3; ++m) {
      const Matrix y = m == 1 ? Matrix(rng.hermitian(1)) : rng.hermitian(static_cast<Eigen::Index>(binomial(d, m - 1)));
      if (m > 1) {
        const Matrix dense = D.grow(from_sector(y, d, m - 1), m, 0.0);
        CHECK(diff(ctx.cross_step(y, m), to_sector(dense, d, m)) < 1e-13);
      }
      const Matrix g = rng.hermitian(static_cast<Eigen::Index>(binomial(d, m)));
      CHECK(diff(ctx.loop_step(g, m), to_sector(D.loop(from_sector(g, d, m), m, 0.0), d, m)) < 1e-13);
    }
    CHECK_THROWS_AS(ctx.cross_step(Matrix::Identity(3, 3), 2), ShapeError);
  }

  TEST_CASE("recursion against literal nested commutators") {
    Rng rng(43);
    const int d = 4;
    const ModeSystem sys = chain_system(d);
    const TreeContext ctx(sys);
    const Dense D{d, sys.h(), sys.pair_operator()};
    const PSectorOperator a = random_sector_op(rng, d, 1);
    const double t = 0.4;
    const std::vector<double> times = {0.3, 0.1, 0.05};

    const Matrix at = expm_herm(D.free_h(1), -t) * from_sector(a.matrix, d, 1) * expm_herm(D.free_h(1), t);
    CHECK(diff(G_recursive(ctx, a, 0, 0, t, times).op.matrix, a.matrix) > 1e-3);
    CHECK(diff(G_recursive(ctx, a, 0, 0, t, times).op.matrix, to_sector(at, d, 1)) < 1e-13);

    const Matrix g10 = D.grow(at, 2, times[0]);
    const Matrix g20 = D.grow(g10, 3, times[1]);
    const Matrix g11 = D.loop(g10, 2, times[1]);
    const Matrix g21 = D.grow(g11, 3, times[2]) + D.loop(g20, 3, times[2]);
    const Matrix g30 = D.grow(g20, 4, times[2]);

    const TreeOperator r20 = G_recursive(ctx, a, 2, 0, t, times);
    CHECK(r20.particles() == 3);
    CHECK(diff(r20.op.matrix, to_sector(g20, d, 3)) < 1e-13);
    CHECK(diff(G_recursive(ctx, a, 2, 1, t, times).op.matrix, to_sector(g11, d, 2)) < 1e-13);
    CHECK(diff(G_recursive(ctx, a, 3, 1, t, times).op.matrix, to_sector(g21, d, 3)) < 1e-13);
    CHECK(diff(G_recursive(ctx, a, 3, 0, t, times).op.matrix, to_sector(g30, d, 4)) < 1e-13);

    // The projected dense recursion without exchange is the same object.
    DenseTreeOptions opt;
    opt.exchange = false;
    opt.project = true;
    const DenseTree dt(sys, opt);
    CHECK(diff(to_sector(dt.pointwise(at, 1, times), d, 4), G_recursive(ctx, a, 3, 0, t, times).op.matrix) < 1e-13);
  }

  TEST_CASE("vanishing cases of the recursion") {
    Rng rng(44);
    const int d = 5;
    const TreeContext ctx(chain_system(d));
    const PSectorOperator a = random_sector_op(rng, d, 1);
    const std::vector<double> times = {0.2, 0.1};
    CHECK(max_abs(G_recursive(ctx, a, 2, 3, 0.3, times).op.matrix) == 0.0);
    CHECK(max_abs(G_recursive(ctx, a, 2, -1, 0.3, times).op.matrix) == 0.0);
    const PSectorOperator id(d, 1, Matrix::Identity(5, 5));
    CHECK(max_abs(G_recursive(ctx, id, 1, 1, 0.3, times).op.matrix) < 1e-15);
    CHECK(max_abs(G_recursive(ctx, id, 1, 0, 0.3, times).op.matrix) < 1e-14);
    CHECK_THROWS_AS(G_recursive(ctx, a, 3, 0, 0.3, times), RangeError);

    const TreeContext free(free_system(d));
    const auto terms = integrate_tree_terms(free, a, 3, 0.4, 4);
    for (int k = 1; k <= 3; ++k) CHECK(max_abs(terms[static_cast<std::size_t>(k)].matrix) == 0.0);
    const TreeContext small(chain_system(3));
    const auto capped = integrate_tree_terms(small, random_sector_op(rng, 3, 1), 4, 0.4, 3);
    CHECK(capped.size() == 5);
    CHECK(capped[3].matrix.size() == 0);
  }

  TEST_CASE("simplex integration matches the pointwise recursion") {
    Rng rng(45);
    const int d = 5;
    const TreeContext ctx(chain_system(d));
    for (int p = 1; p <= 2; ++p) {
      const PSectorOperator a = random_sector_op(rng, d, p);
      const double t = 0.35;
      const int nodes = 3;
      const auto terms = integrate_tree_terms(ctx, a, 3 - p + 1, t, nodes);
      CHECK(diff(terms[0].matrix, free_evolve_op(ctx, a, t).matrix) < 1e-15);
      for (int k = 1; k <= 3 - p + 1; ++k) {
        Matrix sum = Matrix::Zero(ctx.dim(p + k), ctx.dim(p + k));
        for (const auto& pt : simplex_rule(k, t, nodes)) sum += pt.weight * G_recursive(ctx, a, k, 0, t, pt.times).op.matrix;
        CHECK(diff(terms[static_cast<std::size_t>(k)].matrix, sum) < 1e-13);
      }
    }
  }

  TEST_CASE("first tree term is the derivative of the Hartree-Fock pairing") {
    Rng rng(46);
    const int d = 6;
    const ModeSystem sys = chain_system(d, 1.0, 0.5);
    const TreeContext ctx(sys);
    const OrbitalSet phi(rng.orthonormal(d, 3));
    const Matrix gamma = phi.density();
    const PSectorOperator a = random_sector_op(rng, d, 1);
    const double dt = 1e-3;
    HFConfig cfg;
    cfg.dt = 1e-4;
    const Matrix g_dt = evolve_hf_density(DensityMatrix(gamma), sys, dt, cfg).states.back().gamma;
    const cplx hf = (a.matrix * g_dt).trace();
    const cplx free = (free_evolve_op(ctx, a, dt).matrix * gamma).trace();
    const auto terms = integrate_tree_terms(ctx, a, 1, dt, 5);
    const cplx g1 = (terms[1].matrix * quasi_free_marginal(gamma, 2).matrix).trace();
    MESSAGE("first-order increment " << g1 << " vs " << hf - free);
    CHECK(std::abs(g1) > 1e-7);
    CHECK(std::abs(g1 - (hf - free)) < 1e-2 * std::abs(g1));
  }

  TEST_CASE("tree series") {
    Rng rng(47);
    const int d = 4;
    const ModeSystem sys = chain_system(d);
    const TreeContext ctx(sys);
    const OrbitalSet phi(rng.orthonormal(d, 2));
    const Matrix gamma = phi.density();
    const PSectorOperator a = random_sector_op(rng, d, 1);
    const double t = 0.2;

    QuadratureSpec q0{5, 0};
    const TreeSeries s0 = tree_series(ctx, a, gamma, t, q0, false);
    REQUIRE(s0.terms.size() == 1);
    CHECK(std::abs(s0.terms[0] - (free_evolve_op(ctx, a, t).matrix * gamma).trace()) < 1e-14);

    const TreeContext free(free_system(d));
    const TreeSeries sf = tree_series(free, a, gamma, t, QuadratureSpec{5, 3}, false);
    for (std::size_t k = 1; k < sf.terms.size(); ++k) CHECK(sf.terms[k] == cplx(0.0));
    CHECK(sf.partial_sums.back() == sf.partial_sums.front());

    // The unprojected exchange series sums to the interaction-picture Hartree-Fock
    // pairing; the projected tree series approaches the lab-frame one to O(||gamma||).
    const Matrix mixed = rng.density_matrix(d);
    const TreeSeries s = tree_series(ctx, a, mixed, t, QuadratureSpec{6, 3});
    REQUIRE(s.t_available);
    const auto traj = evolve_hf_density(DensityMatrix(mixed), sys, t);
    const cplx target = (a.matrix * traj.interaction.back().gamma).trace();
    std::vector<double> errs;
    for (const auto& ps : s.t_partial_sums) errs.push_back(std::abs(ps - target));
    MESSAGE("T-series errors " << errs[0] << " " << errs[1] << " " << errs[2] << " " << errs[3]);
    for (std::size_t k = 1; k < errs.size(); ++k) CHECK(errs[k] < errs[k - 1]);
    CHECK(errs.back() < 1e-4);
    CHECK(!s.tail_warning);
    CHECK_FALSE(tree_series(ctx, a, mixed, t, QuadratureSpec{5, 3}, true).t_terms.empty());
    const TreeContext big(chain_system(12));
    const TreeSeries nb = tree_series(big, random_sector_op(rng, 12, 1), rng.density_matrix(12), t, QuadratureSpec{3, 2});
    CHECK_FALSE(nb.t_available);

    CHECK_THROWS_AS(tree_series(ctx, a, gamma, t, QuadratureSpec{1, 2}), ValidationError);
  }

  TEST_CASE("graph counts") {
    CHECK(count_elementary_terms(1, 0, 0).count == 1);
    CHECK(count_elementary_terms(1, 1, 0).count == 2);
    CHECK(count_elementary_terms(1, 2, 0).count == 8);
    CHECK(count_elementary_terms(1, 2, 0).aux_bound == 4.0 * 1024.0);
    CHECK(count_elementary_terms(1, 0, 0).bound == 1.0);
    CHECK(count_elementary_terms(2, 1, 2).count == 0);
    for (int p = 1; p <= 3; ++p)
      for (int k = 0; k <= 5; ++k) {
        double tree = 1.0;
        for (int j = 0; j < k; ++j) tree *= 2.0 * (p + j);
        CHECK(static_cast<double>(count_elementary_terms(p, k, 0).count) == tree);
        for (int l = 0; l <= k; ++l) CHECK(count_elementary_terms(p, k, l).satisfied);
      }
    CHECK_THROWS_AS(count_elementary_terms(-1, 1, 0), RangeError);
  }

  TEST_CASE("loop remainder") {
    Rng rng(48);
    const int d = 6, N = 3;
    const OrbitalSet phi(rng.orthonormal(d, N));
    const PSectorOperator a = random_sector_op(rng, d, 1);
    const QuadratureSpec q{5, 3};
    const TreeContext free(free_system(d));
    const auto lf = loop_remainder(free, a, phi, 0.3, q, 3);
    CHECK(lf.norm < 1e-13);
    const TreeContext ctx(chain_system(d));
    const auto l0 = loop_remainder(ctx, a, phi, 0.0, q, 3);
    CHECK(l0.norm < 1e-13);
    const auto l = loop_remainder(ctx, a, phi, 0.3, q, 1);
    CHECK(l.norm > 1e-4);
    CHECK(l.tail_estimate > 0.0);
    CHECK(loop_remainder(ctx, a, phi, 0.3, q, 2).tail_estimate == 0.0);
  }

  TEST_CASE("Hartree-Fock against tree terms") {
    Rng rng(49);
    const PSectorOperator a = random_sector_op(rng, 6, 1);
    const OrbitalSet phi(rng.orthonormal(6, 3));
    const TreeContext free(free_system(6));
    CHECK(hf_vs_tree_gap(free, a, phi.density(), 0.2, QuadratureSpec{5, 3}, 3).gap < 1e-12);

    const TreeContext ctx(chain_system(6));
    const auto g2 = hf_vs_tree_gap(ctx, a, phi.density(), 0.2, QuadratureSpec{5, 3}, 2);
    const auto g3 = hf_vs_tree_gap(ctx, a, phi.density(), 0.2, QuadratureSpec{5, 3}, 3);
    const auto terms = integrate_tree_terms_with_error(ctx, a, 0.2, QuadratureSpec{5, 3});
    MESSAGE("gap K=2 " << g2.gap << " K=3 " << g3.gap);
    CHECK(std::abs(g2.gap - g3.gap) <= terms[3].quad_error + 1e-12);
  }

  TEST_CASE("theory constants") {
    const auto c = TheoryConstants::from(chain_system(5, 2.0));
    CHECK(c.kappa == doctest::Approx(2.0));
    CHECK(c.T_report == doctest::Approx(1.0 / (2048.0 * std::numbers::pi * 4.0)));
    CHECK(std::isinf(TheoryConstants::from(free_system(5)).T_report));
    QuadratureSpec bad{2, -1};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS(integrate_tree_term(TreeContext(chain_system(4)), PSectorOperator(4, 1, Matrix::Identity(4, 4)), 4,
                                        0.1, QuadratureSpec{3, 2}),
                    RangeError);
  }
}
