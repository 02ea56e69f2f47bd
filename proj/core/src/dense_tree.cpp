// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/dense_tree.hpp"

#include <functional>

#include "fermiflow/errors.hpp"
#include "fermiflow/quadrature.hpp"

namespace fermiflow {
namespace {

std::int64_t ipow(int base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Matrix tensor_power(const Matrix& u, int m) {
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < m; ++i) out = kron(out, u);
  return out;
}

Matrix embed_sector_operator(const PSectorOperator& a) {
  const Matrix iota = sector_embedding(a.d, a.p);
  return iota * a.matrix * iota.adjoint();
}

DenseTree::DenseTree(const ModeSystem& sys, DenseTreeOptions opt) : sys_(sys), opt_(opt), h_(sys.h()) {}

bool DenseTree::fits(int particles) const { return ipow(sys_.d(), particles) <= opt_.max_dim; }

const Matrix& DenseTree::static_cross(int m) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = cross_[m];
  if (!slot) {
    const int d = sys_.d();
    const std::int64_t n = ipow(d, m);
    Matrix c = Matrix::Zero(n, n);
    std::vector<int> digits(static_cast<std::size_t>(m));
    for (std::int64_t idx = 0; idx < n; ++idx) {
      std::int64_t rest = idx;
      for (int k = m - 1; k >= 0; --k) {
        digits[k] = static_cast<int>(rest % d);
        rest /= d;
      }
      const int xm = digits[m - 1];
      for (int i = 0; i + 1 < m; ++i) {
        const double w = sys_.pair()(digits[i], xm);
        c(idx, idx) += w;
        if (opt_.exchange) {
          // -W E on slots (i, m): E swaps digits i and m, then W multiplies.
          std::int64_t swapped = 0;
          for (int k = 0; k < m; ++k) {
            int dig = digits[k];
            if (k == i) dig = xm;
            else if (k == m - 1) dig = digits[i];
            swapped = swapped * d + dig;
          }
          c(idx, swapped) -= w;
        }
      }
    }
    slot = std::make_unique<Matrix>(std::move(c));
  }
  return *slot;
}

const Matrix& DenseTree::projector(int m) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = proj_.find(m);
    if (it != proj_.end()) return *it->second;
  }
  Matrix p = antisymmetrizer(m, sys_.d());
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = proj_[m];
  if (!slot) slot = std::make_unique<Matrix>(std::move(p));
  return *slot;
}

Matrix DenseTree::cross_pair(int m, double s) const {
  if (!fits(m)) throw CapacityError("dense tensor space exceeds capacity");
  const Matrix& c = static_cross(m);
  if (s == 0.0) return c;
  const Matrix u = tensor_power(h_.propagator(s), m);
  return u.adjoint() * c * u;
}

Matrix DenseTree::step(const Matrix& x, int m, double s) const {
  const Matrix c = cross_pair(m, s);
  const Matrix xe = kron(x, Matrix::Identity(sys_.d(), sys_.d()));
  Matrix out = kI * (c * xe - xe * c);
  if (opt_.project) {
    const Matrix& p = projector(m);
    out = p * out * p;
  }
  return out;
}

Matrix DenseTree::pointwise(const Matrix& base, int p, const std::vector<double>& times) const {
  Matrix g = base;
  int m = p;
  for (double s : times) {
    ++m;
    g = step(g, m, s);
  }
  return g;
}

std::vector<Matrix> DenseTree::integrate(const Matrix& base, int p, int K, double t, int nodes) const {
  if (!fits(p + K)) throw CapacityError("dense tensor space exceeds capacity");
  std::vector<Matrix> out;
  out.push_back(base);
  const GaussRule g = gauss_legendre(nodes);
  for (int k = 1; k <= K; ++k) out.push_back(Matrix::Zero(ipow(sys_.d(), p + k), ipow(sys_.d(), p + k)));
  // depth-first over the nested rule, reusing each parent's value
  struct Frame {
    Matrix value;
    double time;
    double weight;
  };
  std::function<void(int, const Frame&)> descend = [&](int level, const Frame& parent) {
    if (level > K) return;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double s = parent.time * g.nodes[i];
      const double w = parent.weight * parent.time * g.weights[i];
      Frame child{step(parent.value, p + level, s), s, w};
      out[static_cast<std::size_t>(level)] += w * child.value;
      descend(level + 1, child);
    }
  };
  descend(1, Frame{base, t, 1.0});
  return out;
}

std::vector<std::complex<double>> t_series_terms(const ModeSystem& sys, const PSectorOperator& a,
                                                 const Matrix& gamma, double t, const QuadratureSpec& quad,
                                                 std::int64_t max_dim) {
  DenseTreeOptions opt;
  opt.max_dim = max_dim;
  const DenseTree tree(sys, opt);
  const int K = quad.K_max;
  const int p = a.p;
  if (!tree.fits(p + K)) throw CapacityError("dense tensor space exceeds capacity");
  const std::vector<Matrix> ops = tree.integrate(embed_sector_operator(a), p, K, t, quad.nodes_per_level);
  const Matrix sigma = factorial(p) * antisymmetrizer(p, sys.d());
  std::vector<std::complex<double>> out;
  for (int k = 0; k <= K; ++k) {
    const int m = p + k;
    const Matrix gm = tensor_power(gamma, m);
    const Matrix sig = kron(sigma, Matrix::Identity(ipow(sys.d(), k), ipow(sys.d(), k)));
    out.push_back((ops[static_cast<std::size_t>(k)] * gm * sig).trace());
  }
  return out;
}

}  // namespace fermiflow
