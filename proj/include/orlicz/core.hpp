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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

namespace orlicz {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr double kInf = std::numeric_limits<double>::infinity();
/// Relative slack for sampled inequality checks.
inline constexpr double kRelTol = 1e-12;

// Error hierarchy. Everything thrown by the library derives from Error so
// front-ends can map categories onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct ArgumentError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct HypothesisError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

/// Throws NumericError when `v` is NaN. +inf is a legal value everywhere in
/// the library (modulars and energies live in [0, +inf]).
inline double require_not_nan(double v, std::string_view what) {
  if (std::isnan(v)) throw NumericError("NaN produced in " + std::string(what));
  return v;
}

/// log(exp(a) + exp(b)) without overflow; handles -inf operands.
inline double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a == kInf || b == kInf) return kInf;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

/// Neumaier-compensated accumulator. Sums of a few thousand cell terms
/// reproduce to the last bit regardless of magnitude spread.
class CompensatedSum {
 public:
  void add(double v) {
    if (std::isinf(v)) {
      inf_ = inf_ || v > 0;
      neg_inf_ = neg_inf_ || v < 0;
      return;
    }
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const {
    if (inf_ && neg_inf_) throw NumericError("inf - inf in compensated sum");
    if (inf_) return kInf;
    if (neg_inf_) return -kInf;
    return sum_ + comp_;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  bool inf_ = false;
  bool neg_inf_ = false;
};

/// Running log-sum-exp: accumulates log(sum_i exp(v_i)).
class LogSumExp {
 public:
  void add(double log_term) {
    require_not_nan(log_term, "log-sum-exp");
    if (log_term == -kInf) return;
    terms_.push_back(log_term);
  }
  [[nodiscard]] double value() const {
    if (terms_.empty()) return -kInf;
    const double hi = *std::max_element(terms_.begin(), terms_.end());
    if (hi == kInf) return kInf;
    CompensatedSum s;
    for (double t : terms_) s.add(std::exp(t - hi));
    return hi + std::log(s.value());
  }

 private:
  std::vector<double> terms_;
};

/// Shortest representation that parses back to the identical double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw NumericError("to_chars failed");
  return {buf, ptr};
}

inline double parse_double(std::string_view s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ArgumentError("not a number: '" + std::string(s) + "'");
  return v;
}

/// Reproducible generator: splitmix-seeded xoshiro256**. Draws are defined
/// bit-for-bit here rather than through <random> distributions, whose output
/// differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    for (auto& s : state_) {
      seed += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = seed;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      s = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4]{};
};

/// Worker cap shared by the experiment drivers; 0 means hardware concurrency.
inline unsigned& thread_cap() {
  static unsigned cap = 0;
  return cap;
}

inline unsigned effective_threads() {
  unsigned cap = thread_cap();
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return cap;
}

/// Runs body(i) for i in [0, n) on up to effective_threads() workers. Each
/// index writes only its own slot, so results do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(effective_threads(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace orlicz
