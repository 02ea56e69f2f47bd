// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/mode_system.hpp"

#include <cmath>
#include <cstdlib>

#include "fermiflow/errors.hpp"

namespace fermiflow {

ModeSystem::ModeSystem(Matrix h, std::function<double(int)> w) : d_(static_cast<int>(h.rows())), h_(std::move(h)) {
  if (d_ < 1) throw ValidationError("mode count must be positive");
  w_.resize(static_cast<std::size_t>(d_));
  for (int m = 0; m < d_; ++m) {
    const double plus = w(m);
    const double minus = w(-m);
    if (std::abs(plus - minus) > 1e-14 * std::max(1.0, std::abs(plus)))
      throw ValidationError("pair potential is not even");
    w_[static_cast<std::size_t>(m)] = plus;
  }
  validate();
}

ModeSystem::ModeSystem(Matrix h, std::vector<double> w_table)
    : d_(static_cast<int>(h.rows())), h_(std::move(h)), w_(std::move(w_table)) {
  if (d_ < 1) throw ValidationError("mode count must be positive");
  if (static_cast<int>(w_.size()) < d_) throw ShapeError("pair table shorter than mode count");
  w_.resize(static_cast<std::size_t>(d_));
  validate();
}

void ModeSystem::validate() {
  if (h_.cols() != d_) throw ShapeError("one-body Hamiltonian must be square");
  if (!is_hermitian(h_, 1e-13)) throw ValidationError("one-body Hamiltonian is not Hermitian");
  h_ = 0.5 * (h_ + h_.adjoint());
  pair_.resize(d_, d_);
  for (int x = 0; x < d_; ++x)
    for (int y = 0; y < d_; ++y) pair_(x, y) = w_[static_cast<std::size_t>(std::abs(x - y))];
  const Matrix w = pair_operator();
  const Matrix e = swap_operator(d_);
  if (max_abs(w * e - e * w) != 0.0) throw ValidationError("pair operator does not commute with the swap");
}

double ModeSystem::w(int m) const {
  const int a = std::abs(m);
  if (a >= d_) throw RangeError("pair distance outside the lattice");
  return w_[static_cast<std::size_t>(a)];
}

Matrix ModeSystem::pair_operator() const {
  Matrix out = Matrix::Zero(d_ * d_, d_ * d_);
  for (int x = 0; x < d_; ++x)
    for (int y = 0; y < d_; ++y) out(x * d_ + y, x * d_ + y) = pair_(x, y);
  return out;
}

Matrix ModeSystem::exchange_pair_operator() const {
  const Matrix w = pair_operator();
  return w - w * swap_operator(d_);
}

double ModeSystem::interaction_norm() const { return pair_.cwiseAbs().maxCoeff(); }

bool ModeSystem::interacting() const {
  for (double v : w_)
    if (v != 0.0) return true;
  return false;
}

ModeSystem ModeSystem::with_h(Matrix h) const { return ModeSystem(std::move(h), w_); }

ModeSystem ModeSystem::without_interaction() const {
  return ModeSystem(h_, std::vector<double>(static_cast<std::size_t>(d_), 0.0));
}

Matrix swap_operator(int d) {
  Matrix e = Matrix::Zero(d * d, d * d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) e(y * d + x, x * d + y) = 1.0;
  return e;
}

Matrix hopping_chain(int d, double tau) {
  Matrix h = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) h(i, i) = 2.0 * tau;
  for (int i = 0; i + 1 < d; ++i) {
    h(i, i + 1) = -tau;
    h(i + 1, i) = -tau;
  }
  return h;
}

Matrix molecule_chain(int d, double tau, double depth) {
  Matrix h = hopping_chain(d, tau);
  const double c = 0.5 * (d - 1);
  for (int i = 0; i < d; ++i) h(i, i) -= depth / (std::abs(i - c) + 1.0);
  return h;
}

std::function<double(int)> soft_coulomb(double g) {
  return [g](int m) { return g / (std::abs(m) + 1.0); };
}

}  // namespace fermiflow
