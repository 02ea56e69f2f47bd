// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace testing;

namespace {

Matrix random_block(Rng& rng, int d, int p, int q) {
  return rng.gaussian(static_cast<Eigen::Index>(binomial(d, p)), static_cast<Eigen::Index>(binomial(d, q)));
}

Matrix hermitian_block(Rng& rng, int d, int p) { return rng.hermitian(static_cast<Eigen::Index>(binomial(d, p))); }

}  // namespace

TEST_SUITE("fock-egorov") {
  TEST_CASE("creation operators and CAR") {
    const int d = 5;
    const FockContext ctx(d, 3);
    CHECK(ctx.car_residual() < 1e-15);
    for (int x = 0; x < d; ++x) {
      CHECK(diff(Matrix(ctx.creation(x)), oracle::jw_creation(d, x)) == 0.0);
      CHECK(diff(Matrix(ctx.annihilation(x)), oracle::jw_creation(d, x).adjoint()) == 0.0);
    }
    const auto idx = ctx.sector_indices(2);
    const auto ref = oracle::fock_sector(d, 2);
    REQUIRE(idx.size() == ref.size());
    for (std::size_t i = 0; i < idx.size(); ++i) CHECK(idx[i] == ref[i]);
    CHECK_THROWS_AS(FockContext(15, 2), CapacityError);
    CHECK_THROWS_AS(FockContext(4, 0), RangeError);
  }

  TEST_CASE("Wick quantisation") {
    Rng rng(61);
    const int d = 4, N = 3;
    const FockContext ctx(d, N);
    Matrix e = Matrix::Zero(d, d);
    e(0, 0) = 1.0;
    const SparseMatrix q = quantise(GradedObservable::single(d, 1, 1, e), ctx);
    const Matrix c = oracle::jw_creation(d, 0);
    CHECK(diff(Matrix(q), c * c.adjoint() / N) < 1e-15);

    // Sector restriction against the first-quantized operator.
    const int d6 = 6;
    const PSectorOperator a(d6, 2, hermitian_block(rng, d6, 2));
    const auto ga = GradedObservable::from_sector(a);
    CHECK(diff(quantise_sector(ga, 3, 3), second_quantise_sector(a, 3)) < 1e-13);
    const FockContext ctx6(d6, 3);
    const SparseMatrix full = quantise(ga, ctx6);
    CHECK(diff(ctx6.sector_block(full, 3, 3), second_quantise_sector(a, 3)) < 1e-13);
    for (auto [p, qq] : {std::pair{2, 1}, std::pair{0, 2}, std::pair{1, 0}}) {
      const auto g = GradedObservable::single(d6, p, qq, random_block(rng, d6, p, qq));
      const SparseMatrix fg = quantise(g, ctx6);
      CHECK(diff(quantise_sector(g, 3, 3), ctx6.sector_block(fg, 3, 3 + p - qq)) < 1e-13);
    }
    GradedObservable mixed(d6);
    mixed.set(1, 1, hermitian_block(rng, d6, 1));
    mixed.set(2, 1, random_block(rng, d6, 2, 1));
    CHECK_THROWS_AS(quantise_sector(mixed, 3, 3), ValidationError);
  }

  TEST_CASE("quantised Grassmann Hamiltonian") {
    const int d = 6;
    const ModeSystem sys = chain_system(d);
    const GradedObservable H = grassmann_hamiltonian(sys);
    for (int N = 1; N <= 4; ++N) {
      const Matrix nh = static_cast<double>(N) * quantise_sector(H, N, N);
      CHECK(diff(nh, build_hamiltonian(sys, N).matrix()) < 1e-13);
    }
  }

  TEST_CASE("field brackets are exact") {
    Rng rng(62);
    const int d = 5;
    const auto a = GradedObservable::single(d, 0, 1, random_block(rng, d, 0, 1));
    const auto b = GradedObservable::single(d, 1, 0, random_block(rng, d, 1, 0));
    for (int N : {2, 3, 5}) {
      const FockContext ctx(d, N);
      const auto r = deformation_check(a, b, ctx);
      CHECK(r.anticommutator_residual < 1e-14);
      CHECK(r.anticommutator_norm > 0.0);
      const SparseMatrix qa = quantise(a, ctx), qb = quantise(b, ctx);
      const Matrix anti = Matrix(qa * qb + qb * qa);
      const cplx c = anti(0, 0);
      CHECK(diff(anti, c * Matrix::Identity(anti.rows(), anti.cols())) < 1e-14);
      CHECK(std::abs(c - (a.block(0, 1) * b.block(1, 0))(0, 0) / static_cast<double>(N)) < 1e-14);
    }
    const auto x = GradedObservable::single(d, 1, 1, hermitian_block(rng, d, 1));
    const auto y = GradedObservable::single(d, 1, 1, hermitian_block(rng, d, 1));
    CHECK(deformation_check(x, y, FockContext(d, 3)).commutator_residual < 1e-13);
  }

  TEST_CASE("two-body deformation selects the commutator") {
    Rng rng(63);
    const int d = 10;
    const auto a = GradedObservable::single(d, 2, 2, hermitian_block(rng, d, 2));
    const auto b = GradedObservable::single(d, 2, 2, hermitian_block(rng, d, 2));
    const DeformationSweep s = deformation_sweep(a, b, {2, 4, 8});
    MESSAGE("commutator slope " << s.commutator_slope << " relative " << s.commutator_relative_slope
                                << ", anticommutator slope " << s.anticommutator_slope << " relative "
                                << s.anticommutator_relative_slope);
    CHECK(s.bracket == "commutator");
    CHECK(s.commutator_slope <= -1.6);
    CHECK(s.anticommutator_relative_slope > -0.5);

    // One-body commutators close exactly at every N.
    const auto x = GradedObservable::single(d, 1, 1, hermitian_block(rng, d, 1));
    const auto y = GradedObservable::single(d, 1, 1, hermitian_block(rng, d, 1));
    const DeformationSweep s1 = deformation_sweep(x, y, {2, 4, 8});
    CHECK(s1.bracket == "commutator");
    for (const auto& r : s1.points) CHECK(r.commutator_residual < 1e-13);
  }

  TEST_CASE("products quantise up to a vanishing correction") {
    Rng rng(64);
    const int d = 10;
    const auto a = GradedObservable::single(d, 1, 1, hermitian_block(rng, d, 1));
    const auto b = GradedObservable::single(d, 1, 1, hermitian_block(rng, d, 1));
    const auto ab = graded_product(a, b);
    double last = 1e300;
    for (int N : {2, 4, 8}) {
      const double gap = operator_norm(quantise_sector(ab, N, N) - quantise_sector(a, N, N) * quantise_sector(b, N, N));
      CHECK(gap > 1e-6);
      CHECK(gap < last);
      last = gap;
    }
  }

  TEST_CASE("Egorov comparison") {
    Rng rng(65);
    const int d = 6;
    const auto a = GradedObservable::single(d, 1, 1, hermitian_block(rng, d, 1));
    const QuadratureSpec quad{5, 3};

    const TreeContext ctx(chain_system(d));
    CHECK(egorov_check(ctx, a, 3, 0.0, quad, 3).norm_difference < 1e-13);
    CHECK_THROWS_AS(egorov_check(ctx, a, 3, 0.25, quad, 3), RangeError);

    const TreeContext free(free_system(d));
    const auto rf = egorov_check(free, a, 3, 0.25, quad, 3);
    CHECK(rf.norm_difference < 1e-8);
    CHECK(std::isinf(rf.T_report));

    const auto r2 = egorov_check(ctx, a, 2, 0.25, quad, 3, true);
    const auto r3 = egorov_check(ctx, a, 3, 0.25, quad, 3, true);
    MESSAGE("Egorov N=2 " << r2.norm_difference << " N=3 " << r3.norm_difference);
    CHECK(r2.norm_difference > r3.norm_difference);
    CHECK(r3.norm_difference > 1e-8);
    CHECK(r2.tail_estimate == 0.0);

    const auto off = GradedObservable::single(d, 2, 1, random_block(rng, d, 2, 1));
    CHECK_THROWS_AS(egorov_check(ctx, off, 3, 0.0, quad, 3), UnsupportedError);
    CHECK_THROWS_AS(egorov_check(ctx, a, 7, 0.0, quad, 3), CapacityError);
  }
}
