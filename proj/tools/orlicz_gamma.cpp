// Copyright 2026 The orlicz-gamma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include <CLI11.hpp>

#include "orlicz/cli.hpp"

int main(int argc, char** argv) {
  namespace oc = orlicz::cli;
  CLI::App app{"Generalized Orlicz norms and L^p -> L^inf Gamma-convergence experiments"};
  app.set_version_flag("--version", orlicz::kVersion);
  app.require_subcommand(1);

  oc::Options opt;
  std::string out_dir;

  auto* check = app.add_subcommand("check", "Run the hypothesis preflight only");
  check->add_option("--config", opt.config_path, "Experiment config (JSON)")->required();

  auto* run = app.add_subcommand("run", "Preflight, run the experiment and write reports");
  run->add_option("--config", opt.config_path, "Experiment config (JSON)")->required();
  run->add_option("--threads", opt.threads, "Worker cap (0 = available parallelism)")->check(CLI::NonNegativeNumber);
  run->add_flag("--report-only", opt.report_only, "Skip hypothesis enforcement and assertions");
  run->add_option("--out", out_dir, std::string("Output directory (overrides $") + oc::kOutDirEnv + ")");

  std::string report_path;
  auto* report = app.add_subcommand("report", "Re-render a JSON report as CSV");
  report->add_option("report", report_path, "Report JSON file")->required();
  report->add_option("--out", out_dir, "Directory for the CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? oc::kOk : oc::kConfig;
  }
  if (!out_dir.empty()) opt.out_dir = out_dir;

  if (*check) return oc::cmd_check(opt, std::cout, std::cerr);
  if (*run) return oc::cmd_run(opt, std::cout, std::cerr);
  return oc::cmd_report(report_path, opt.out_dir, std::cout, std::cerr);
}
