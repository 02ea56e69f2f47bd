// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fermiflow/config.hpp"
#include "fermiflow/errors.hpp"
#include "fermiflow/experiments.hpp"
#include "fermiflow/report.hpp"
#include "fermiflow/version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermiflow: fermionic mean-field experiments"};
  app.set_version_flag("--version", fermiflow::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  bool override_guard = false;
  CLI::App* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_path, "output path (default: config output.path, else stdout)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--override-time-guard", override_guard, "allow Egorov times at or beyond T_report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    fermiflow::ExperimentConfig cfg = fermiflow::load_config(config_path);
    if (override_guard) cfg.override_time_guard = true;
    if (!format.empty()) cfg.output.format = format;
    if (!out_path.empty()) cfg.output.path = out_path;

    const fermiflow::ExperimentReport report = fermiflow::run_experiment(cfg);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';

    std::ofstream file;
    if (!cfg.output.path.empty()) {
      file.open(cfg.output.path, std::ios::binary);
      if (!file) throw fermiflow::ConfigError("cannot write " + cfg.output.path);
    }
    std::ostream& out = cfg.output.path.empty() ? std::cout : file;
    if (cfg.output.format == "json")
      fermiflow::write_json(report, out);
    else
      fermiflow::write_csv(report, out);
    return 0;
  } catch (const fermiflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fermiflow::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const fermiflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
