// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>

#include "fermiflow/experiments.hpp"
#include "fermiflow/tree.hpp"

namespace fermiflow {

/// Numbers use %.17g. Lines starting with '#' carry metadata, timestamps and wall times;
/// everything else is deterministic.
void write_csv(const ExperimentReport& r, std::ostream& out);
void write_json(const ExperimentReport& r, std::ostream& out);

std::string format_cell(const Cell& c);

/// Tree term table: k, term_value_re, term_value_im, quad_error_est.
void write_term_table(const TreeSeries& s, std::ostream& out);

}  // namespace fermiflow
