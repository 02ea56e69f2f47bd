// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fermiflow/graded.hpp"
#include "fermiflow/tree.hpp"

namespace fermiflow {

struct EgorovResult {
  int N = 0;
  double t = 0.0;
  /// ||e^{itNH} A e^{-itNH} - (A o phi^t)^_N|| on the N-sector
  double norm_difference = 0.0;
  /// ||(G^(K+1,0)_t(a))^_N||, zero when the level exceeds N
  double tail_estimate = 0.0;
  /// change of the quantised flow under node doubling
  double quad_error = 0.0;
  double T_report = 0.0;
};

/// Quantum Heisenberg flow against the quantised superhamiltonian flow for a
/// gauge-invariant observable, with NH_N built from the Grassmann Hamiltonian.
EgorovResult egorov_check(const TreeContext& ctx, const GradedObservable& a, int N, double t,
                          const QuadratureSpec& quad, int K, bool override_time_guard = false,
                          bool estimate_quadrature = true);

}  // namespace fermiflow
