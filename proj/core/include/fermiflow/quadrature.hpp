// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace fermiflow {

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1].
GaussRule gauss_legendre(int n);

/// Nested Gauss-Legendre points of the k-simplex 0 < t_k < ... < t_1 < t.
struct SimplexPoint {
  std::vector<double> times;  // t_1 .. t_k
  double weight = 0.0;
};
std::vector<SimplexPoint> simplex_rule(int k, double t, int nodes_per_level);

}  // namespace fermiflow
