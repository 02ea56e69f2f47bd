// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "oracles/oracles.hpp"

namespace oracle {

namespace {

// Normal order: psibar with decreasing mode, then psi with increasing mode.
std::pair<int, int> order_key(const Gen& g) { return g.first == 0 ? std::make_pair(0, -g.second) : std::make_pair(1, g.second); }

// Sorts a monomial into normal order; returns 0 when a generator repeats.
int canonical(Monomial& m) {
  std::set<Gen> seen(m.begin(), m.end());
  if (seen.size() != m.size()) return 0;
  int sign = 1;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j + 1 < m.size() - i; ++j)
      if (order_key(m[j + 1]) < order_key(m[j])) {
        std::swap(m[j], m[j + 1]);
        sign = -sign;
      }
  return sign;
}

void accumulate(Poly& p, Monomial m, cplx c) {
  const int s = canonical(m);
  if (s == 0 || c == 0.0) return;
  p[m] += static_cast<double>(s) * c;
}

std::vector<std::vector<int>> subsets(int d, int n) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != n) continue;
    std::vector<int> s;
    for (int x = 0; x < d; ++x)
      if (mask & (1 << x)) s.push_back(x);
    out.push_back(s);
  }
  return out;
}

double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

}  // namespace

Poly block_to_poly(const Matrix& a, int d, int p, int q) {
  Poly out;
  const auto S = subsets(d, p);
  const auto T = subsets(d, q);
  const double f = std::sqrt(fact(p) * fact(q));
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < T.size(); ++j) {
      Monomial m;
      for (auto it = S[i].rbegin(); it != S[i].rend(); ++it) m.emplace_back(0, *it);
      for (int y : T[j]) m.emplace_back(1, y);
      accumulate(out, m, f * a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  return out;
}

std::map<std::pair<int, int>, Matrix> poly_to_blocks(const Poly& f, int d) {
  std::map<std::pair<int, int>, Matrix> out;
  for (const auto& [m, c] : f) {
    std::vector<int> s, t;
    for (const auto& g : m) (g.first == 0 ? s : t).push_back(g.second);
    std::sort(s.begin(), s.end());
    std::sort(t.begin(), t.end());
    const int p = static_cast<int>(s.size());
    const int q = static_cast<int>(t.size());
    const auto S = subsets(d, p);
    const auto T = subsets(d, q);
    auto& blk = out[{p, q}];
    if (blk.size() == 0) blk = Matrix::Zero(static_cast<Eigen::Index>(S.size()), static_cast<Eigen::Index>(T.size()));
    const auto i = std::find(S.begin(), S.end(), s) - S.begin();
    const auto j = std::find(T.begin(), T.end(), t) - T.begin();
    blk(i, j) += c / std::sqrt(fact(p) * fact(q));
  }
  return out;
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      accumulate(out, m, ca * cb);
    }
  return out;
}

Poly add(const Poly& a, const Poly& b, cplx s) {
  Poly out = a;
  for (const auto& [m, c] : b) out[m] += s * c;
  return out;
}

Poly left_derivative(const Poly& f, Gen g) {
  Poly out;
  for (const auto& [m, c] : f) {
    auto it = std::find(m.begin(), m.end(), g);
    if (it == m.end()) continue;
    const auto j = it - m.begin();
    Monomial r = m;
    r.erase(r.begin() + j);
    accumulate(out, r, (j % 2 == 0 ? 1.0 : -1.0) * c);
  }
  return out;
}

Poly right_derivative(const Poly& f, Gen g) {
  Poly out;
  for (const auto& [m, c] : f) {
    auto it = std::find(m.begin(), m.end(), g);
    if (it == m.end()) continue;
    const auto j = it - m.begin();
    const auto after = static_cast<long>(m.size()) - 1 - j;
    Monomial r = m;
    r.erase(r.begin() + j);
    accumulate(out, r, (after % 2 == 0 ? 1.0 : -1.0) * c);
  }
  return out;
}

Poly poisson(const Poly& a, const Poly& b, int d) {
  Poly out;
  const cplx i{0.0, 1.0};
  for (int x = 0; x < d; ++x) {
    out = add(out, multiply(right_derivative(a, {0, x}), left_derivative(b, {1, x})), i);
    out = add(out, multiply(right_derivative(a, {1, x}), left_derivative(b, {0, x})), i);
  }
  return out;
}

}  // namespace oracle
