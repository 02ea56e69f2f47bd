// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force reference implementations. They share only the linear algebra
// aliases with the library and build everything on full tensor or Fock spaces.

#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "fermiflow/linalg.hpp"

namespace oracle {

using fermiflow::cplx;
using fermiflow::Matrix;
using fermiflow::Vector;

// ---- dense tensor space (C^d)^{(x) n} ----------------------------------------

int ipow(int d, int n);

/// P_- on (C^d)^{(x) n}, summed over all permutations.
Matrix antisymmetrizer(int d, int n);

/// Column j is the unit antisymmetric tensor of the j-th sorted n-subset
/// (subsets listed in increasing bitmask order).
Matrix embedding(int d, int n);

/// sqrt(N!) P_-(phi_1 (x) ... (x) phi_N).
Vector slater_tensor(const Matrix& phis);

/// sum_i h_i + coupling sum_{i<j} w(x_i - x_j) on (C^d)^{(x) n}.
Matrix hamiltonian(const Matrix& h, const std::vector<double>& w, int n, double coupling);

/// Trace over the last n - p factors.
Matrix partial_trace(const Matrix& rho, int d, int n, int p);

/// V_{ij} on (C^d)^{(x) n} for a diagonal two-body V given on C^d (x) C^d.
Matrix two_body(const Matrix& v, int d, int n, int i, int j);

/// a (x) 1 (x) ... (x) 1 on n factors for a on the first k factors.
Matrix pad(const Matrix& a, int d, int k, int n);

// ---- Grassmann polynomials ----------------------------------------------------

/// Generator: (0, x) is psibar(x), (1, x) is psi(x).
using Gen = std::pair<int, int>;
using Monomial = std::vector<Gen>;
using Poly = std::map<Monomial, cplx>;

/// Sum over S, T of sqrt(p! q!) a_ST psibar(s_p) ... psibar(s_1) psi(t_1) ... psi(t_q).
Poly block_to_poly(const Matrix& a, int d, int p, int q);
/// Inverse of block_to_poly, block by block.
std::map<std::pair<int, int>, Matrix> poly_to_blocks(const Poly& f, int d);

Poly multiply(const Poly& a, const Poly& b);
Poly add(const Poly& a, const Poly& b, cplx s = 1.0);
Poly left_derivative(const Poly& f, Gen g);
Poly right_derivative(const Poly& f, Gen g);
/// i sum_x [a <-d/dpsibar(x) ->d/dpsi(x) b + a <-d/dpsi(x) ->d/dpsibar(x) b]
Poly poisson(const Poly& a, const Poly& b, int d);

// ---- Fock space via Jordan-Wigner --------------------------------------------

/// Dense creation operator a*_x on 2^d states; state index = sum n_x 2^x, sign from
/// the occupied modes below x.
Matrix jw_creation(int d, int x);

/// Columns of the n-particle states, increasing bitmask order.
std::vector<int> fock_sector(int d, int n);

// ---- Hartree-Fock -------------------------------------------------------------

/// -i([h, gamma] + tr_2 [W(1 - E), gamma (x) gamma]) on the full two-particle space.
Matrix hf_density_rhs(const Matrix& h, const std::vector<double>& w, const Matrix& gamma);

/// Direct and exchange terms applied orbital by orbital from the normalized set.
Matrix hf_orbital_rhs(const Matrix& h, const std::vector<double>& w, const Matrix& psi);

/// RK4 on the plain (not interaction-picture) density equation.
Matrix hf_density_rk4(const Matrix& h, const std::vector<double>& w, Matrix gamma, double t, double dt);

}  // namespace oracle
