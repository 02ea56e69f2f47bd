// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <map>

#include "fermiflow/egorov.hpp"
#include "fermiflow/errors.hpp"
#include "fermiflow/exact.hpp"
#include "fermiflow/graded.hpp"
#include "fermiflow/parallel.hpp"
#include "fermiflow/tree.hpp"

namespace fermiflow {

namespace {

using Rows = std::vector<std::vector<Cell>>;

struct RowBatch {
  Rows rows;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ExperimentReport start(const ExperimentConfig& cfg, std::vector<std::string> columns) {
  ExperimentReport r;
  r.experiment = to_string(cfg.experiment);
  r.config_hash = cfg.hash;
  r.config_canonical = cfg.canonical;
  r.columns = std::move(columns);
  r.columns.emplace_back("config_hash");
  r.timestamp = utc_now();
  return r;
}

template <class F>
void sweep(const ExperimentConfig& cfg, ExperimentReport& report, F&& row) {
  auto batches = parallel_map(cfg.sweep.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    RowBatch b = row(cfg.sweep[i], i);
    b.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return b;
  });
  for (auto& b : batches) {
    for (auto& r : b.rows) {
      r.emplace_back(report.config_hash);
      report.rows.push_back(std::move(r));
    }
    for (auto& w : b.warnings) report.warnings.push_back(std::move(w));
    report.wall_seconds.push_back(b.seconds);
  }
}

// Fills the slope column (index `col`) with the log-log fit over rows sharing `key`.
template <class Key>
void fill_slopes(ExperimentReport& r, std::size_t n_col, std::size_t y_col, std::size_t col, Key&& key) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& row : r.rows) {
    auto& g = groups[key(row)];
    g.first.push_back(static_cast<double>(std::get<std::int64_t>(row[n_col])));
    g.second.push_back(std::get<double>(row[y_col]));
  }
  std::map<std::string, double> slope;
  for (const auto& [k, g] : groups) {
    bool ok = g.first.size() >= 2;
    for (double y : g.second) ok = ok && y > 0.0 && std::isfinite(y);
    bool distinct = false;
    for (double x : g.first) distinct = distinct || x != g.first.front();
    slope[k] = ok && distinct ? loglog_slope(g.first, g.second) : std::numeric_limits<double>::quiet_NaN();
  }
  for (auto& row : r.rows) row[col] = slope[key(row)];
}

std::string time_key(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return buf;
}

HFConfig final_only(HFConfig c) {
  c.record_every = std::numeric_limits<int>::max();
  return c;
}

std::uint64_t row_seed(const ExperimentConfig& cfg, int N, int salt) {
  return cfg.seed * 1000003ull + static_cast<std::uint64_t>(N) * 7919ull + static_cast<std::uint64_t>(salt);
}

Matrix idempotency_defect(const Matrix& gamma, int N) {
  const Matrix g = static_cast<double>(N) * gamma;
  return g * g - g;
}

RealVector sorted_spectrum(const Matrix& gamma) { return HermitianEigen(gamma).values(); }

struct Drifts {
  double energy = 0.0;
  double gram = 0.0;
  double trace = 0.0;
  double spectrum = 0.0;
};

void track(Drifts& d, double e0, double e, const Matrix& g0, const Matrix& g, const Matrix& gram0, const Matrix& gram) {
  d.energy = std::max(d.energy, std::abs(e - e0));
  d.gram = std::max(d.gram, max_abs(gram - gram0));
  d.trace = std::max(d.trace, std::abs(g.trace() - g0.trace()));
  d.spectrum = std::max(d.spectrum, (sorted_spectrum(g) - sorted_spectrum(g0)).cwiseAbs().maxCoeff());
}

}  // namespace

OrbitalSet fermi_sea(const Matrix& h, int N) {
  if (N < 1 || N > h.rows()) throw CapacityError("N must lie in [1, d]");
  const HermitianEigen e(h);
  return OrbitalSet(e.vectors().leftCols(N));
}

OrbitalSet initial_orbitals(const ExperimentConfig& cfg, const Matrix& h, int N) {
  if (cfg.initial == "random") {
    Rng rng(row_seed(cfg, N, 1));
    return OrbitalSet(rng.orthonormal(h.rows(), N));
  }
  return fermi_sea(h, N);
}

PSectorOperator experiment_observable(const ExperimentConfig& cfg, const OrbitalSet& phi, int p) {
  const int d = phi.d();
  if (cfg.observable == "random") {
    Rng rng(row_seed(cfg, phi.count(), 2 + p));
    return PSectorOperator(d, p, rng.hermitian(static_cast<Eigen::Index>(binomial(d, p))));
  }
  const OrbitalSet on = phi.orthonormal();
  const Matrix proj = on.phis * on.phis.adjoint();
  return PSectorOperator(d, p, quasi_free_marginal(proj, p).matrix / factorial(p));
}

ExperimentReport run_convergence(const ExperimentConfig& cfg) {
  ExperimentReport r = start(cfg, {"N", "p", "t", "trace_norm_gap", "p2_over_N", "fitted_slope"});
  const int p = cfg.p;
  sweep(cfg, r, [&](const SweepPoint& pt, std::size_t) {
    const ModeSystem sys = cfg.system.build(pt.N);
    const OrbitalSet phi = initial_orbitals(cfg, sys.h(), pt.N);
    const PSectorOperator exact = evolved_marginal(phi, sys, pt.t, p);
    const OrbitalTrajectory hf = evolve_hf_orbitals(phi, sys, pt.t, final_only(cfg.integrator));
    const PSectorOperator mf = marginal(slater(hf.states.back().orthonormal()), p);
    RowBatch b;
    b.rows.push_back({std::int64_t{pt.N}, std::int64_t{p}, pt.t, trace_norm(mf.matrix - exact.matrix),
                      static_cast<double>(p * p) / pt.N, 0.0});
    return b;
  });
  fill_slopes(r, 0, 3, 5, [](const std::vector<Cell>& row) { return time_key(std::get<double>(row[2])); });
  return r;
}

ExperimentReport run_tree_truncation(const ExperimentConfig& cfg) {
  ExperimentReport r =
      start(cfg, {"N", "t", "K", "partial_sum_re", "partial_sum_im", "abs_gap_hf", "quad_error"});
  sweep(cfg, r, [&](const SweepPoint& pt, std::size_t) {
    const ModeSystem sys = cfg.system.build(pt.N);
    const TreeContext ctx(sys);
    const OrbitalSet phi = initial_orbitals(cfg, sys.h(), pt.N);
    const Matrix gamma = phi.density();
    const PSectorOperator a = experiment_observable(cfg, phi, cfg.p);
    const TreeSeries s = tree_series(ctx, a, gamma, pt.t, cfg.quadrature, false);
    const DensityTrajectory hf = evolve_hf_density(DensityMatrix(gamma), sys, pt.t, final_only(cfg.integrator));
    const cplx hf_value = (a.matrix * quasi_free_marginal(hf.states.back().gamma, cfg.p).matrix).trace();
    RowBatch b;
    for (int k = 0; k <= cfg.quadrature.K_max; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const cplx v = s.partial_sums[kk];
      b.rows.push_back({std::int64_t{pt.N}, pt.t, std::int64_t{k}, v.real(), v.imag(), std::abs(v - hf_value),
                        s.quad_errors[kk]});
    }
    if (s.tail_warning) b.warnings.push_back("N=" + std::to_string(pt.N) + " t=" + time_key(pt.t) + ": " + s.warning);
    return b;
  });
  return r;
}

ExperimentReport run_egorov(const ExperimentConfig& cfg) {
  ExperimentReport r =
      start(cfg, {"N", "t", "norm_difference", "tree_tail_estimate", "quad_error", "fitted_slope"});
  const TheoryConstants tc = TheoryConstants::from(cfg.system.build(cfg.sweep.front().N));
  for (const auto& pt : cfg.sweep)
    if (!cfg.override_time_guard && pt.t >= tc.T_report)
      throw ConfigError("egorov: t = " + time_key(pt.t) + " is not below T = " + time_key(tc.T_report) +
                        "; set override_time_guard to run beyond it");
  r.metadata.emplace_back("kappa", time_key(tc.kappa));
  r.metadata.emplace_back("T_report", time_key(tc.T_report));
  sweep(cfg, r, [&](const SweepPoint& pt, std::size_t) {
    const ModeSystem sys = cfg.system.build(pt.N);
    const TreeContext ctx(sys);
    const OrbitalSet phi = initial_orbitals(cfg, sys.h(), pt.N);
    const GradedObservable a = GradedObservable::from_sector(experiment_observable(cfg, phi, cfg.p));
    const EgorovResult e = egorov_check(ctx, a, pt.N, pt.t, cfg.quadrature, cfg.quadrature.K_max, true);
    RowBatch b;
    b.rows.push_back({std::int64_t{pt.N}, pt.t, e.norm_difference, e.tail_estimate, e.quad_error, 0.0});
    if (e.tail_estimate >= e.norm_difference && e.norm_difference > 0.0)
      b.warnings.push_back("N=" + std::to_string(pt.N) + ": tree tail estimate is not below the difference");
    return b;
  });
  fill_slopes(r, 0, 2, 5, [](const std::vector<Cell>& row) { return time_key(std::get<double>(row[1])); });
  return r;
}

ExperimentReport run_conservation(const ExperimentConfig& cfg) {
  ExperimentReport r = start(cfg, {"formulation", "N", "t", "energy_drift", "gram_drift", "trace_drift",
                                   "spectrum_drift"});
  sweep(cfg, r, [&](const SweepPoint& pt, std::size_t) {
    const ModeSystem sys = cfg.system.build(pt.N);
    const OrbitalSet phi = initial_orbitals(cfg, sys.h(), pt.N);
    const int N = pt.N;
    RowBatch b;
    auto row = [&](const char* name, const Drifts& d) {
      b.rows.push_back({std::string(name), std::int64_t{N}, pt.t, d.energy, d.gram, d.trace, d.spectrum});
    };
    {
      const OrbitalTrajectory tr = evolve_hf_orbitals(phi, sys, pt.t, cfg.integrator);
      const OrbitalSet& s0 = tr.states.front();
      const double e0 = hf_energy(s0, sys);
      const Matrix g0 = s0.density();
      const Matrix gram0 = gram(s0);
      Drifts d;
      for (const auto& s : tr.states) track(d, e0, hf_energy(s, sys), g0, s.density(), gram0, gram(s));
      row("orbitals", d);
    }
    {
      const DensityTrajectory tr = evolve_hf_density(DensityMatrix(phi.density()), sys, pt.t, cfg.integrator);
      const Matrix& g0 = tr.states.front().gamma;
      const double e0 = hf_energy(tr.states.front(), sys);
      const Matrix def0 = idempotency_defect(g0, N);
      Drifts d;
      for (const auto& s : tr.states)
        track(d, e0, hf_energy(s, sys), g0, s.gamma, def0, idempotency_defect(s.gamma, N));
      row("density", d);
    }
    {
      const KappaTrajectory tr = evolve_kappa(KappaFactor::from_orbitals(phi), sys, pt.t, cfg.integrator);
      const KappaFactor& k0 = tr.states.front();
      const Matrix g0 = k0.density();
      const double e0 = hf_energy(DensityMatrix(g0), sys);
      const Matrix gram0 = k0.kappa.adjoint() * k0.kappa;
      Drifts d;
      for (const auto& s : tr.states) {
        const Matrix g = s.density();
        track(d, e0, hf_energy(DensityMatrix(g), sys), g0, g, gram0, s.kappa.adjoint() * s.kappa);
      }
      row("kappa", d);
    }
    return b;
  });
  return r;
}

ExperimentReport run_graph_count(const ExperimentConfig& cfg) {
  ExperimentReport r = start(cfg, {"p", "k", "l", "count", "bound", "aux_bound", "satisfied"});
  sweep(cfg, r, [&](const SweepPoint& pt, std::size_t) {
    RowBatch b;
    const int lo = pt.l ? *pt.l : 0;
    const int hi = pt.l ? *pt.l : pt.k;
    for (int l = lo; l <= hi; ++l) {
      const GraphCount g = count_elementary_terms(pt.p, pt.k, l);
      b.rows.push_back({std::int64_t{g.p}, std::int64_t{g.k}, std::int64_t{g.l},
                        static_cast<std::int64_t>(g.count), g.bound, g.aux_bound, g.satisfied});
    }
    return b;
  });
  return r;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::kConvergence: return run_convergence(cfg);
    case ExperimentKind::kTreeTruncation: return run_tree_truncation(cfg);
    case ExperimentKind::kEgorov: return run_egorov(cfg);
    case ExperimentKind::kConservation: return run_conservation(cfg);
    case ExperimentKind::kGraphCount: return run_graph_count(cfg);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace fermiflow
