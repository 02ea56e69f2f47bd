// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "fermiflow/fermiflow.hpp"

namespace {

using namespace fermiflow;

ModeSystem chain(int d) { return ModeSystem(hopping_chain(d, 0.25), soft_coulomb(1.0)); }

void BM_Hamiltonian(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const ModeSystem sys = chain(2 * N);
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(sys, N).matrix().data());
}
BENCHMARK(BM_Hamiltonian)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_EvolvedMarginal(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const ModeSystem sys = chain(2 * N);
  const OrbitalSet phi(Rng(7).orthonormal(2 * N, N));
  const auto H = build_hamiltonian(sys, N);
  for (auto _ : state) benchmark::DoNotOptimize(evolved_marginal(phi, H, 0.3, 1).matrix.data());
}
BENCHMARK(BM_EvolvedMarginal)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_HfOrbitals(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const ModeSystem sys = chain(d);
  const OrbitalSet phi(Rng(3).orthonormal(d, d / 2));
  for (auto _ : state) benchmark::DoNotOptimize(evolve_hf_orbitals(phi, sys, 0.1).gram_drift);
}
BENCHMARK(BM_HfOrbitals)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_TreeTerms(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const ModeSystem sys = chain(8);
  const PSectorOperator a(8, 1, Rng(5).hermitian(8));
  for (auto _ : state) {
    TreeContext ctx(sys);
    benchmark::DoNotOptimize(integrate_tree_terms(ctx, a, K, 0.1, 5).back().matrix.data());
  }
}
BENCHMARK(BM_TreeTerms)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_GradedPoisson(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(11);
  const auto a = GradedObservable::single(d, 2, 2, rng.hermitian(static_cast<Eigen::Index>(binomial(d, 2))));
  const auto b = GradedObservable::single(d, 2, 2, rng.hermitian(static_cast<Eigen::Index>(binomial(d, 2))));
  for (auto _ : state) benchmark::DoNotOptimize(graded_poisson(a, b).blocks().size());
}
BENCHMARK(BM_GradedPoisson)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_QuantiseSector(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Rng rng(13);
  const auto a = GradedObservable::single(10, 2, 2, rng.hermitian(45));
  for (auto _ : state) benchmark::DoNotOptimize(quantise_sector(a, N, N).data());
}
BENCHMARK(BM_QuantiseSector)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
