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
#pragma once

// Verbs behind the orlicz-gamma executable: check, run, report.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "orlicz/config.hpp"

namespace orlicz::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kPreflight = 3, kAssertion = 4, kIo = 5 };

/// Overrides the configured output directory; --out overrides this.
inline constexpr const char* kOutDirEnv = "ORLICZ_OUT_DIR";

struct Options {
  std::string config_path;
  unsigned threads = 0;
  bool report_only = false;
  std::optional<std::string> out_dir;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + p.string() + "'");
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed on '" + p.string() + "'");
}

inline std::filesystem::path resolve_out_dir(const Options& opt, const ExperimentConfig& cfg) {
  if (opt.out_dir) return *opt.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return cfg.output_dir;
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

inline ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) throw ConfigError("no config given (--config PATH)");
  return parse_config(read_file(path));
}

inline void print_checks(const PreflightReport& pf, std::ostream& os) {
  for (const auto& c : pf.checks)
    os << (c.pass ? "PASS " : "FAIL ") << "preflight: " << c.name << (c.detail.empty() ? "" : " [" + c.detail + "]")
       << '\n';
}

/// Maps the error hierarchy onto exit codes.
template <class Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const HypothesisError& e) {
    err << "hypothesis failure: " << e.what() << '\n';
    return kPreflight;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

inline int cmd_check(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const ExperimentConfig cfg = load_config(opt.config_path);
        const PreflightReport pf = preflight(cfg);
        print_checks(pf, out);
        out << (pf.pass() ? "preflight passed" : "preflight failed") << '\n';
        return pf.pass() ? kOk : kPreflight;
      },
      err);
}

inline std::string summary_text(const ExperimentConfig& cfg, const PreflightReport& pf, const RunResult& res,
                                bool report_only) {
  std::ostringstream s;
  if (report_only)
    s << "*** REPORT-ONLY RUN: hypotheses not enforced, no assertions evaluated ***\n";
  s << "experiment " << kind_name(cfg.kind) << '\n';
  print_checks(pf, s);
  for (const auto& r : res.reports)
    for (const auto& a : r.assertions)
      s << (a.pass ? "PASS " : "FAIL ") << a.name << (a.detail.empty() ? "" : " [" + a.detail + "]") << '\n';
  s << "RESULT " << (report_only ? "REPORT-ONLY" : (res.pass() ? "PASS" : "FAIL")) << '\n';
  return s.str();
}

inline int cmd_run(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const ExperimentConfig cfg = load_config(opt.config_path);
        thread_cap() = opt.threads;
        const PreflightReport pf = preflight(cfg);
        if (!pf.pass() && !opt.report_only) {
          print_checks(pf, err);
          err << "preflight failed; refusing an assertion-mode run (use --report-only to override)\n";
          return kPreflight;
        }
        const bool report_only = opt.report_only;
        const auto dir = resolve_out_dir(opt, cfg);
        ensure_dir(dir);

        const auto t0 = std::chrono::steady_clock::now();
        const RunResult res = execute(cfg, report_only);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        Json outputs = Json::array();
        for (std::size_t i = 0; i < res.reports.size(); ++i) {
          const auto& r = res.reports[i];
          const std::string stem = res.reports.size() == 1 ? r.kind : r.kind + "-" + std::to_string(i + 1);
          std::ostringstream csv;
          write_csv(r, csv);
          write_file(dir / (stem + ".csv"), csv.str());
          write_file(dir / (stem + ".json"), to_json(r).dump(2) + "\n");
          outputs.push_back(stem + ".csv");
          outputs.push_back(stem + ".json");
        }
        for (const auto& [name, u] : res.fields) {
          std::ostringstream csv;
          write_csv(u, csv);
          write_file(dir / (name + ".csv"), csv.str());
          outputs.push_back(name + ".csv");
        }
        const std::string summary = summary_text(cfg, pf, res, report_only);
        write_file(dir / "summary.txt", summary);
        outputs.push_back("summary.txt");

        Json manifest;
        manifest["version"] = kVersion;
        manifest["experiment"] = kind_name(cfg.kind);
        manifest["seed"] = cfg.seed ? Json(*cfg.seed) : Json(nullptr);
        manifest["threads"] = effective_threads();
        manifest["report_only"] = report_only;
        manifest["wall_time_seconds"] = wall;
        manifest["outputs"] = outputs;
        manifest["config"] = to_json(cfg);
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");

        out << summary;
        if (report_only) return kOk;
        return res.pass() ? kOk : kAssertion;
      },
      err);
}

/// Re-renders a JSON report as CSV, to out_dir/<stem>.csv or to `out`.
inline int cmd_report(const std::string& json_path, const std::optional<std::string>& out_dir, std::ostream& out,
                      std::ostream& err) {
  return guarded(
      [&] {
        const std::string text = read_file(json_path);
        ConvergenceReport r;
        try {
          r = report_from_json(Json::parse(text));
        } catch (const Json::exception& e) {
          throw ConfigError("'" + json_path + "' is not a report: " + e.what());
        } catch (const ArgumentError& e) {
          throw ConfigError("'" + json_path + "' is not a report: " + e.what());
        }
        std::ostringstream csv;
        write_csv(r, csv);
        if (out_dir) {
          ensure_dir(*out_dir);
          const auto target = std::filesystem::path(*out_dir) / (std::filesystem::path(json_path).stem().string() + ".csv");
          write_file(target, csv.str());
          out << target.string() << '\n';
        } else {
          out << csv.str();
        }
        return kOk;
      },
      err);
}

}  // namespace orlicz::cli
