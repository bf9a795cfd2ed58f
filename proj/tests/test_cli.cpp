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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "orlicz/cli.hpp"

namespace orlicz {
namespace {

namespace fs = std::filesystem;

const fs::path kTmp = ORLICZ_TEST_TMP;
const fs::path kConfigs = ORLICZ_CONFIG_DIR;

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome exec(const std::string& args, const std::string& env = {}) {
  const fs::path log = kTmp / "last-stdout.txt";
  fs::create_directories(kTmp);
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string("\"") + ORLICZ_GAMMA_EXE + "\" " + args +
                          " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Outcome r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = cli::read_file(log);
  return r;
}

std::string cfg(const std::string& name) { return "--config \"" + (kConfigs / name).string() + "\""; }

fs::path fresh(const std::string& name) {
  const fs::path p = kTmp / name;
  fs::remove_all(p);
  return p;
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::create_directories(kTmp);
  const fs::path p = kTmp / name;
  cli::write_file(p, body);
  return p;
}

const char* kSmallNorm = R"({
  "experiment": "norm-convergence",
  "grid": {"dim": 1, "lower": [0], "upper": [1], "cells": [400]},
  "ladder": {"phi": {"kind": "constant-power", "p": 1}, "start": 2, "factor": 2, "count": 12},
  "field": {"preset": "affine", "value": 0, "slope": [1]},
  "tolerances": {"gap": 1e-2}
})";

TEST(Cli, CheckExitCodes) {
  EXPECT_EQ(exec("check " + cfg("gamma_norm_weighted.json")).code, 0);
  for (const char* bad : {"falsify_anchor.json", "falsify_uniform_L.json", "falsify_ratio.json", "falsify_h5.json"}) {
    const Outcome r = exec("check " + cfg(bad));
    EXPECT_EQ(r.code, 3) << bad;
    EXPECT_NE(r.out.find("FAIL preflight"), std::string::npos) << bad;
  }
}

TEST(Cli, ConfigAndIoErrors) {
  EXPECT_EQ(exec("check --config \"" + (kTmp / "does-not-exist.json").string() + "\"").code, 5);
  const fs::path broken = write_config("broken.json", "{\"experiment\": \"gamma-norm\",\n \"grid\": }");
  const Outcome r = exec("check --config \"" + broken.string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 2"), std::string::npos) << r.out;
  const fs::path typo = write_config("typo.json", R"({"experiment": "inequality-suite", "seed": 1, "sede": 2})");
  EXPECT_EQ(exec("check --config \"" + typo.string() + "\"").code, 2);
  EXPECT_EQ(exec("run --bogus-flag").code, 2);
  EXPECT_EQ(exec("").code, 2);
  EXPECT_EQ(exec("--help").code, 0);
}

TEST(Cli, RunWritesArtifacts) {
  const fs::path out = fresh("norm-run/nested/dir");
  const fs::path conf = write_config("small_norm.json", kSmallNorm);
  const Outcome r = exec("run --config \"" + conf.string() + "\" --out \"" + out.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"norm-convergence.csv", "norm-convergence.json", "summary.txt", "manifest.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;

  const std::string csv = cli::read_file(out / "norm-convergence.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,p_minus,p_plus,norm,sup_norm,gap,embedding_constant");
  const ConvergenceReport rep = report_from_json(Json::parse(cli::read_file(out / "norm-convergence.json")));
  const auto gaps = rep.column_values("gap");
  for (std::size_t n = gaps.size() / 2; n + 1 < gaps.size(); ++n) EXPECT_LT(gaps[n + 1], gaps[n]);

  const std::string summary = cli::read_file(out / "summary.txt");
  EXPECT_NE(summary.find("PASS final gap below threshold"), std::string::npos);
  EXPECT_NE(summary.find("RESULT PASS"), std::string::npos);

  const Json manifest = Json::parse(cli::read_file(out / "manifest.json"));
  EXPECT_EQ(manifest["version"], kVersion);
  EXPECT_EQ(manifest["experiment"], "norm-convergence");
  EXPECT_TRUE(manifest["wall_time_seconds"].is_number());
  const ExperimentConfig original = parse_config(cli::read_file(conf));
  EXPECT_EQ(to_json(config_from_json(manifest["config"])), to_json(original));
}

TEST(Cli, AssertionFailureExitCode) {
  Json j = Json::parse(kSmallNorm);
  j["tolerances"]["gap"] = 1e-9;
  const fs::path conf = write_config("strict_norm.json", j.dump());
  const Outcome r = exec("run --config \"" + conf.string() + "\" --out \"" + fresh("strict").string() + "\"");
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("FAIL final gap below threshold"), std::string::npos) << r.out;
}

TEST(Cli, PreflightRefusalAndReportOnly) {
  const fs::path out = fresh("report-only");
  EXPECT_EQ(exec("run " + cfg("falsify_anchor.json") + " --out \"" + out.string() + "\"").code, 3);
  EXPECT_FALSE(fs::exists(out / "summary.txt"));
  const Outcome r = exec("run " + cfg("falsify_anchor.json") + " --report-only --out \"" + out.string() + "\"");
  EXPECT_EQ(r.code, 0) << r.out;
  const std::string summary = cli::read_file(out / "summary.txt");
  EXPECT_NE(summary.find("REPORT-ONLY RUN"), std::string::npos);
  EXPECT_NE(summary.find("FAIL preflight: (H4)"), std::string::npos);
  EXPECT_EQ(Json::parse(cli::read_file(out / "manifest.json"))["report_only"], true);
}

TEST(Cli, SuiteIsByteIdenticalAcrossRuns) {
  const fs::path a = fresh("suite-a");
  const fs::path b = fresh("suite-b");
  ASSERT_EQ(exec("run " + cfg("inequality_suite.json") + " --threads 1 --out \"" + a.string() + "\"").code, 0);
  ASSERT_EQ(exec("run " + cfg("inequality_suite.json") + " --threads 4 --out \"" + b.string() + "\"").code, 0);
  for (const char* f : {"inequality-suite.csv", "inequality-suite.json", "summary.txt"})
    EXPECT_EQ(cli::read_file(a / f), cli::read_file(b / f)) << f;
}

TEST(Cli, OutputDirectoryPrecedence) {
  const fs::path env_dir = fresh("from-env");
  const fs::path flag_dir = fresh("from-flag");
  const fs::path conf = write_config("tiny_suite.json", R"({"experiment": "inequality-suite", "seed": 5,
      "suite": {"cases": 5}, "output": {"dir": ")" + (kTmp / "from-config").string() + R"("}})");
  const std::string env = std::string(cli::kOutDirEnv) + "=\"" + env_dir.string() + "\"";
  ASSERT_EQ(exec("run --config \"" + conf.string() + "\"", env).code, 0);
  EXPECT_TRUE(fs::exists(env_dir / "summary.txt"));
  ASSERT_EQ(exec("run --config \"" + conf.string() + "\" --out \"" + flag_dir.string() + "\"", env).code, 0);
  EXPECT_TRUE(fs::exists(flag_dir / "summary.txt"));
  fs::remove_all(kTmp / "from-config");
  ASSERT_EQ(exec("run --config \"" + conf.string() + "\"").code, 0);
  EXPECT_TRUE(fs::exists(kTmp / "from-config" / "summary.txt"));
}

TEST(Cli, UnwritableOutputIsIoError) {
  const fs::path blocker = write_config("blocker-file", "not a directory");
  const Outcome r = exec("run " + cfg("inequality_suite.json") + " --out \"" + (blocker / "sub").string() + "\"");
  EXPECT_EQ(r.code, 5) << r.out;
  EXPECT_NE(r.out.find("io error"), std::string::npos);
}

TEST(Cli, ReportReRendersJson) {
  const fs::path out = fresh("rerender");
  const fs::path conf = write_config("small_norm.json", kSmallNorm);
  ASSERT_EQ(exec("run --config \"" + conf.string() + "\" --out \"" + out.string() + "\"").code, 0);
  const Outcome r = exec("report \"" + (out / "norm-convergence.json").string() + "\"");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, cli::read_file(out / "norm-convergence.csv"));

  const fs::path again = fresh("rerender-out");
  ASSERT_EQ(exec("report \"" + (out / "norm-convergence.json").string() + "\" --out \"" + again.string() + "\"").code, 0);
  EXPECT_EQ(cli::read_file(again / "norm-convergence.csv"), cli::read_file(out / "norm-convergence.csv"));

  const fs::path junk = write_config("junk.json", R"({"hello": 1})");
  EXPECT_EQ(exec("report \"" + junk.string() + "\"").code, 2);
  EXPECT_EQ(exec("report \"" + (kTmp / "absent.json").string() + "\"").code, 5);
}

TEST(Cli, ExampleConfigsParse) {
  for (const auto& e : fs::directory_iterator(kConfigs)) {
    if (e.path().extension() != ".json") continue;
    EXPECT_NO_THROW(parse_config(cli::read_file(e.path()))) << e.path();
  }
}

}  // namespace
}  // namespace orlicz
