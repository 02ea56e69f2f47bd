// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fermiflow/config.hpp"
#include "fermiflow/fermionic.hpp"

namespace fermiflow {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct ExperimentReport {
  std::string experiment;
  std::string config_hash;
  std::string config_canonical;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Deterministic key/value metadata (T_report, ...).
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> warnings;
  /// Per sweep entry; kept out of the data rows.
  std::vector<double> wall_seconds;
  std::string timestamp;
};

ExperimentReport run_convergence(const ExperimentConfig& cfg);
ExperimentReport run_tree_truncation(const ExperimentConfig& cfg);
ExperimentReport run_egorov(const ExperimentConfig& cfg);
ExperimentReport run_conservation(const ExperimentConfig& cfg);
ExperimentReport run_graph_count(const ExperimentConfig& cfg);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Lowest N eigenvectors of h.
OrbitalSet fermi_sea(const Matrix& h, int N);

/// Initial orbitals of a sweep row.
OrbitalSet initial_orbitals(const ExperimentConfig& cfg, const Matrix& h, int N);

/// Observable of a sweep row: the projector onto the p-th exterior power of the
/// occupied span, or a seeded random Hermitian matrix of norm one.
PSectorOperator experiment_observable(const ExperimentConfig& cfg, const OrbitalSet& phi, int p);

}  // namespace fermiflow
