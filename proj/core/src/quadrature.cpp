// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "fermiflow/errors.hpp"

namespace fermiflow {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ValidationError("Gauss-Legendre rule needs at least one node");
  GaussRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    // ascending order on [0, 1]
    const auto j = static_cast<std::size_t>(n - 1 - i);
    r.nodes[j] = 0.5 * (x + 1.0);
    r.weights[j] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

std::vector<SimplexPoint> simplex_rule(int k, double t, int nodes_per_level) {
  std::vector<SimplexPoint> pts{{{}, 1.0}};
  const GaussRule g = gauss_legendre(nodes_per_level);
  for (int level = 0; level < k; ++level) {
    std::vector<SimplexPoint> next;
    next.reserve(pts.size() * g.nodes.size());
    for (const auto& p : pts) {
      const double upper = p.times.empty() ? t : p.times.back();
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        SimplexPoint q = p;
        q.times.push_back(upper * g.nodes[i]);
        q.weight *= upper * g.weights[i];
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  return pts;
}

}  // namespace fermiflow
