// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fermiflow/hartree_fock.hpp"
#include "fermiflow/mode_system.hpp"
#include "fermiflow/tree.hpp"

namespace fermiflow {

enum class ExperimentKind { kConvergence, kTreeTruncation, kEgorov, kConservation, kGraphCount };

std::string to_string(ExperimentKind k);

struct SystemSpec {
  /// Fixed mode count; d = 2N per sweep row when absent.
  std::optional<int> d;
  std::string h = "hopping";  // hopping | molecule
  double tau = 0.25;
  double depth = 1.0;         // molecule well depth
  std::string w = "soft-coulomb";  // soft-coulomb | none
  double g = 1.0;

  int modes(int N) const { return d ? *d : 2 * N; }
  ModeSystem build(int N) const;
};

struct SweepPoint {
  int N = 0;
  double t = 0.0;
  int p = 0;
  int k = 0;
  /// graph-count rows; all l <= k when absent
  std::optional<int> l;
};

struct OutputSpec {
  std::string path;
  std::string format = "csv";
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kConvergence;
  SystemSpec system;
  std::vector<SweepPoint> sweep;
  /// particle number of the observable or marginal
  int p = 1;
  std::string initial = "fermi-sea";                // fermi-sea | random
  std::string observable = "fermi-sea-projector";   // fermi-sea-projector | random
  HFConfig integrator;
  QuadratureSpec quadrature;
  std::uint64_t seed = 0;
  bool override_time_guard = false;
  OutputSpec output;

  /// Canonical JSON of everything except `output`, and its FNV-1a hash in hex.
  std::string canonical;
  std::string hash;
};

/// Strict parse: unknown keys, wrong types and out-of-range values raise ConfigError
/// with the line of the offending entry.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace fermiflow
