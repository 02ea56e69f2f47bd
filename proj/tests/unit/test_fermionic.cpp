// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace testing;

namespace {

Vector unit(int d, int x) { return Vector::Unit(d, x); }

}  // namespace

TEST_SUITE("fermionic") {
  TEST_CASE("mode system validation") {
    CHECK_THROWS_AS(ModeSystem(Matrix::Zero(3, 2), soft_coulomb(1.0)), ShapeError);
    Matrix h = Matrix::Zero(3, 3);
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(ModeSystem(h, soft_coulomb(1.0)), ValidationError);
    CHECK_THROWS_AS(ModeSystem(hopping_chain(3, 1.0), [](int m) { return m > 0 ? 1.0 : 0.5 * m; }),
                    ValidationError);
    const ModeSystem sys = chain_system(4);
    CHECK(sys.w(-2) == sys.w(2));
    CHECK(sys.w(3) == doctest::Approx(0.25));
    const Matrix e = swap_operator(4);
    CHECK(max_abs(sys.pair_operator() * e - e * sys.pair_operator()) == 0.0);
    CHECK(sys.interaction_norm() == doctest::Approx(1.0));
  }

  TEST_CASE("antisymmetrizer examples") {
    const int d = 3;
    const Vector sym = kron(unit(d, 0), unit(d, 0));
    CHECK(antisymmetrize(2, d, sym).norm() < 1e-15);
    const Vector v = antisymmetrize(2, d, Vector(kron(unit(d, 0), unit(d, 1))));
    const Vector expect = 0.5 * (kron(unit(d, 0), unit(d, 1)) - kron(unit(d, 1), unit(d, 0)));
    CHECK((v - expect).norm() < 1e-15);

    Rng rng(5);
    const Matrix t = rng.gaussian(27, 27);
    const Matrix once = antisymmetrize(3, d, t);
    CHECK(max_abs(antisymmetrize(3, d, once) - once) < 1e-13);
    CHECK_THROWS_AS(antisymmetrize(2, 3, Matrix(Matrix::Identity(8, 8))), ShapeError);
  }

  TEST_CASE("antisymmetrizer matches the permutation-sum oracle") {
    // (d, p) = (8, 4) would need two 4096^2 complex matrices; these sizes cover the
    // same code paths.
    for (auto [d, p] : {std::pair{4, 2}, std::pair{8, 3}, std::pair{6, 4}}) {
      const Matrix lib = antisymmetrizer(p, d);
      const Matrix ref = oracle::antisymmetrizer(d, p);
      CHECK(max_abs(lib - ref) < 1e-14);
      CHECK(max_abs(lib * lib - lib) < 1e-13);
      CHECK(max_abs(sector_embedding(d, p) - oracle::embedding(d, p)) < 1e-14);
    }
  }

  TEST_CASE("slater determinants") {
    Matrix phi = Matrix::Zero(3, 2);
    phi(0, 0) = phi(1, 1) = 1.0;
    const SectorState s = slater(OrbitalSet(phi));
    CHECK(s.coeffs.size() == 3);
    CHECK(std::abs(s.coeffs(s.basis.index(0b011)) - 1.0) < 1e-15);
    CHECK(std::abs(s.coeffs.norm() - 1.0) < 1e-15);

    Rng rng(6);
    for (auto [d, N] : {std::pair{5, 2}, std::pair{6, 3}, std::pair{7, 4}}) {
      const OrbitalSet orb(rng.orthonormal(d, N));
      const SectorState st = slater(orb);
      CHECK(std::abs(st.norm() - 1.0) < 1e-12);
      const Vector dense = oracle::embedding(d, N).adjoint() * oracle::slater_tensor(orb.phis);
      CHECK((dense - st.coeffs).norm() < 1e-13);
    }
    CHECK_THROWS_AS(slater(OrbitalSet(rng.gaussian(3, 2))), ValidationError);
    CHECK_THROWS_AS(slater(OrbitalSet(Matrix::Zero(3, 4))), CapacityError);
  }

  TEST_CASE("marginals") {
    Matrix phi = Matrix::Zero(4, 2);
    phi(0, 0) = phi(1, 1) = 1.0;
    const SectorState s = slater(OrbitalSet(phi));
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = expect(1, 1) = 0.5;
    CHECK(max_abs(marginal(s, 1).matrix - expect) < 1e-15);

    Rng rng(7);
    const int d = 6, N = 3;
    Vector psi = rng.gaussian(20, 1).col(0);
    psi.normalize();
    const SectorState st(SectorBasis(d, N), psi);
    CHECK(max_abs(marginal(st, N).matrix - psi * psi.adjoint()) < 1e-15);

    const Matrix full = oracle::embedding(d, N) * psi;
    const Matrix e2 = oracle::embedding(d, 2);
    const Matrix dense = e2.adjoint() * oracle::partial_trace(full * full.adjoint(), d, N, 2) * e2;
    CHECK(max_abs(marginal(st, 2).matrix - dense) < 1e-13);
    CHECK(std::abs(marginal(st, 2).matrix.trace() - 1.0) < 1e-13);
    CHECK_THROWS_AS(marginal(st, 0), RangeError);
    CHECK_THROWS_AS(marginal(st, 4), RangeError);
  }

  TEST_CASE("trace norm and gram") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = -2.0;
    CHECK(trace_norm(a) == doctest::Approx(3.0).epsilon(1e-14));
    Rng rng(8);
    const Vector v = rng.orthonormal(5, 1).col(0);
    CHECK(trace_norm(Matrix(v * v.adjoint())) == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 0; i < 10; ++i) {
      const Matrix r = rng.gaussian(6, 6);
      CHECK(trace_norm(r) >= std::abs(r.trace()) - 1e-14);
    }

    const OrbitalSet on(rng.orthonormal(6, 3));
    CHECK(max_abs(gram(on) - Matrix::Identity(3, 3)) < 1e-14);
    Matrix twice = Matrix::Zero(3, 2);
    twice(0, 0) = twice(0, 1) = 1.0;
    CHECK(max_abs(gram(OrbitalSet(twice)) - Matrix::Ones(2, 2)) == 0.0);
    const Matrix g = gram(OrbitalSet(rng.gaussian(6, 3)));
    CHECK(max_abs(g - g.adjoint()) < 1e-14);
  }

  TEST_CASE("orbital densities") {
    Rng rng(9);
    const OrbitalSet phi(rng.orthonormal(7, 3));
    const Matrix gamma = phi.density();
    CHECK(std::abs(gamma.trace() - 1.0) < 1e-14);
    CHECK(operator_norm(gamma) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(max_abs(phi.normalized().density() - gamma) < 1e-15);
    CHECK(max_abs(phi.normalized().orthonormal().phis - phi.phis) < 1e-15);
  }
}
