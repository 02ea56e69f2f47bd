// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/sector.hpp"

#include <array>
#include <cmath>

#include "fermiflow/errors.hpp"

namespace fermiflow {
namespace {

struct BinomialTable {
  std::array<std::array<std::uint64_t, kMaxModes + 2>, kMaxModes + 2> c{};
  BinomialTable() {
    for (int n = 0; n <= kMaxModes + 1; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};

const BinomialTable& table() {
  static const BinomialTable t;
  return t;
}

// Enumerate the k-element submasks of `m`.
template <class F>
void for_each_submask(Mask m, int k, F&& f) {
  const std::vector<int> modes = mask_modes(m);
  const int n = static_cast<int>(modes.size());
  if (k < 0 || k > n) return;
  if (k == 0) {
    f(Mask{0});
    return;
  }
  std::uint32_t sel = (std::uint32_t{1} << k) - 1;
  const std::uint32_t limit = std::uint32_t{1} << n;
  while (sel < limit) {
    Mask sub = 0;
    for (std::uint32_t s = sel; s; s &= s - 1) sub |= Mask{1} << modes[std::countr_zero(s)];
    f(sub);
    const std::uint32_t c = sel & (~sel + 1);
    const std::uint32_t r = sel + c;
    sel = (((r ^ sel) >> 2) / c) | r;
  }
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (n <= kMaxModes + 1) return table().c[n][k];
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::uint64_t>(std::llround(r));
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<int> mask_modes(Mask m) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(std::popcount(m)));
  for (; m; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

Eigen::Index subset_rank(Mask m) {
  std::uint64_t r = 0;
  int i = 1;
  for (; m; m &= m - 1, ++i) r += binomial(std::countr_zero(m), i);
  return static_cast<Eigen::Index>(r);
}

SectorBasis::SectorBasis(int d, int n) : d_(d), n_(n) {
  if (d < 1 || d > kMaxModes) throw CapacityError("mode count outside [1, 30]");
  if (n < 0) throw RangeError("negative particle count");
  if (n > d) throw CapacityError("particle count exceeds mode count");
  states_.reserve(binomial(d, n));
  if (n == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack walks n-subsets in increasing bitmask order.
  std::uint64_t v = (std::uint64_t{1} << n) - 1;
  const std::uint64_t limit = std::uint64_t{1} << d;
  while (v < limit) {
    states_.push_back(static_cast<Mask>(v));
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
}

Eigen::Index SectorBasis::index(Mask m) const {
  if (std::popcount(m) != n_ || (d_ < 32 && (m >> d_) != 0)) return -1;
  return subset_rank(m);
}

Matrix split_map(int d, int r, int s) {
  const SectorBasis full(d, r + s), left(d, r), right(d, s);
  const double c = std::sqrt(factorial(r) * factorial(s) / factorial(r + s));
  Matrix out = Matrix::Zero(left.size() * right.size(), full.size());
  for (Eigen::Index col = 0; col < full.size(); ++col) {
    const Mask u = full.state(col);
    for_each_submask(u, r, [&](Mask a) {
      const Mask b = u & ~a;
      out(left.index(a) * right.size() + right.index(b), col) = c * merge_sign(a, b);
    });
  }
  return out;
}

Matrix lift(const Matrix& a, int d, int r, int n) {
  if (r > n) throw RangeError("lift: source sector larger than target");
  const SectorBasis src(d, r), dst(d, n);
  if (a.rows() != src.size() || a.cols() != src.size()) throw ShapeError("lift: operator does not match sector");
  if (r == 0) return a(0, 0) * Matrix::Identity(dst.size(), dst.size());
  const double c2 = factorial(r) * factorial(n - r) / factorial(n);
  Matrix out = Matrix::Zero(dst.size(), dst.size());
  for (Eigen::Index col = 0; col < dst.size(); ++col) {
    const Mask v = dst.state(col);
    for_each_submask(v, n - r, [&](Mask b) {
      const Mask av = v & ~b;
      const Eigen::Index jv = src.index(av);
      const double sv = c2 * merge_sign(av, b);
      for (Eigen::Index ia = 0; ia < src.size(); ++ia) {
        const Mask au = src.state(ia);
        if (au & b) continue;
        const cplx val = a(ia, jv);
        if (val == cplx(0.0)) continue;
        out(dst.index(au | b), col) += sv * static_cast<double>(merge_sign(au, b)) * val;
      }
    });
  }
  return out;
}

Matrix onebody_sum(const Matrix& h, int n) {
  const int d = static_cast<int>(h.rows());
  const SectorBasis basis(d, n);
  Matrix out = Matrix::Zero(basis.size(), basis.size());
  for (Eigen::Index col = 0; col < basis.size(); ++col) {
    const Mask s = basis.state(col);
    for (Mask rest = s; rest; rest &= rest - 1) {
      const int l = std::countr_zero(rest);
      const Mask r = s & ~(Mask{1} << l);
      const int sl = (count_below(s, l) & 1) ? -1 : 1;
      for (int k = 0; k < d; ++k) {
        if (r & (Mask{1} << k)) continue;
        const cplx val = h(k, l);
        if (val == cplx(0.0)) continue;
        const int sk = (count_below(r, k) & 1) ? -1 : 1;
        out(basis.index(r | (Mask{1} << k)), col) += static_cast<double>(sl * sk) * val;
      }
    }
  }
  return out;
}

RealVector pair_energies(const RealMatrix& pair, int n) {
  const int d = static_cast<int>(pair.rows());
  const SectorBasis basis(d, n);
  RealVector out(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const std::vector<int> m = mask_modes(basis.state(i));
    double e = 0.0;
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) e += pair(m[a], m[b]);
    out(i) = e;
  }
  return out;
}

Matrix reduce_state(const Vector& psi, int d, int N, int p) {
  if (p < 0 || p > N) throw RangeError("marginal order outside [0, N]");
  const SectorBasis full(d, N), keep(d, p), rest(d, N - p);
  if (psi.size() != full.size()) throw ShapeError("state does not match sector");
  // X(A, B) = <e_A (x) e_B | psi> with the isometric split; Gamma = X X^dagger.
  const double c = std::sqrt(factorial(p) * factorial(N - p) / factorial(N));
  Matrix x = Matrix::Zero(keep.size(), rest.size());
  for (Eigen::Index col = 0; col < full.size(); ++col) {
    const cplx amp = psi(col);
    if (amp == cplx(0.0)) continue;
    const Mask u = full.state(col);
    for_each_submask(u, p, [&](Mask a) {
      const Mask b = u & ~a;
      x(keep.index(a), rest.index(b)) += c * static_cast<double>(merge_sign(a, b)) * amp;
    });
  }
  return x * x.adjoint();
}

Matrix pair_partial_trace_commutator(const Matrix& rho, const RealMatrix& pair, int p) {
  const int d = static_cast<int>(pair.rows());
  const SectorBasis up(d, p + 1), low(d, p);
  if (rho.rows() != up.size() || rho.cols() != up.size()) throw ShapeError("hierarchy block does not match sector");
  // D(R, x) = sum_{r in R} w(r - x)
  RealMatrix dterm(low.size(), d);
  for (Eigen::Index i = 0; i < low.size(); ++i) {
    const Mask r = low.state(i);
    for (int x = 0; x < d; ++x) {
      double s = 0.0;
      for (Mask rest = r; rest; rest &= rest - 1) s += pair(std::countr_zero(rest), x);
      dterm(i, x) = s;
    }
  }
  const double inv = 1.0 / static_cast<double>(p + 1);
  Matrix out = Matrix::Zero(low.size(), low.size());
  for (int x = 0; x < d; ++x) {
    const Mask bit = Mask{1} << x;
    for (Eigen::Index j = 0; j < low.size(); ++j) {
      const Mask rj = low.state(j);
      if (rj & bit) continue;
      const Eigen::Index uj = up.index(rj | bit);
      const int sj = (count_above(rj, x) & 1) ? -1 : 1;
      for (Eigen::Index i = 0; i < low.size(); ++i) {
        const Mask ri = low.state(i);
        if (ri & bit) continue;
        const Eigen::Index ui = up.index(ri | bit);
        const int si = (count_above(ri, x) & 1) ? -1 : 1;
        out(i, j) += inv * static_cast<double>(si * sj) * (dterm(i, x) - dterm(j, x)) * rho(ui, uj);
      }
    }
  }
  return out;
}

}  // namespace fermiflow
