// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermiflow/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "fermiflow/version.hpp"

namespace fermiflow {

namespace {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
        }
        return v;
      },
      c);
}

}  // namespace

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>)
          return number(v);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::string>)
          return v;
        else
          return std::to_string(v);
      },
      c);
}

void write_csv(const ExperimentReport& r, std::ostream& out) {
  out << "# experiment: " << r.experiment << '\n';
  out << "# version: " << kVersion << '\n';
  out << "# config_hash: " << r.config_hash << '\n';
  out << "# config: " << r.config_canonical << '\n';
  for (const auto& [k, v] : r.metadata) out << "# " << k << ": " << v << '\n';
  out << "# timestamp: " << r.timestamp << '\n';
  out << "# wall_seconds:";
  for (double s : r.wall_seconds) out << ' ' << number(s);
  out << '\n';
  for (const auto& w : r.warnings) out << "# warning: " << w << '\n';
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

void write_json(const ExperimentReport& r, std::ostream& out) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta;
  meta["experiment"] = r.experiment;
  meta["version"] = kVersion;
  meta["config_hash"] = r.config_hash;
  meta["config"] = nlohmann::json::parse(r.config_canonical);
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  meta["timestamp"] = r.timestamp;
  meta["wall_seconds"] = r.wall_seconds;
  meta["warnings"] = r.warnings;
  doc["metadata"] = meta;
  doc["columns"] = r.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json o = nlohmann::json::array();
    for (const auto& c : row) o.push_back(to_json(c));
    rows.push_back(o);
  }
  doc["rows"] = rows;
  out << doc.dump(2) << '\n';
}

void write_term_table(const TreeSeries& s, std::ostream& out) {
  out << "k,term_value_re,term_value_im,quad_error_est\n";
  for (std::size_t k = 0; k < s.terms.size(); ++k)
    out << k << ',' << number(s.terms[k].real()) << ',' << number(s.terms[k].imag()) << ',' << number(s.quad_errors[k])
        << '\n';
}

}  // namespace fermiflow
