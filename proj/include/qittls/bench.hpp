// Copyright 2026 The qittls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Experiment harness: noisy trial sweeps over the benchmark problems, the
// Prony system, CSV and plot-data emission, the Monte Carlo concentration
// suite and the error-bound audit.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qittls/linalg.hpp"
#include "qittls/tls_solvers.hpp"

namespace qittls {

struct BenchConfig {
  std::string problem = "foxgood";  // a problem_names() entry or "prony"
  std::size_t m = 256;
  std::size_t n = 0;  // Prony column count; 0 means m
  std::size_t d = 4;
  std::vector<Method> methods = {Method::kTtls, Method::kRttls, Method::kQiTtls};
  double eta = 1e-3;
  double epsilon = 1e-6;
  std::size_t k = 0;  // 0 means d
  double delta = 0.1;
  std::optional<std::size_t> p = 200;
  double alpha_constant = 100.0;
  std::size_t rttls_sketch = kDefaultRttlsSketch;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  double t_step = 0.2;
  std::string pole_file;  // empty means the built-in pole set
  bool timing = false;
  unsigned threads = 0;  // 0 means hardware concurrency
};

struct TrialRecord {
  std::string problem;
  std::size_t m = 0;
  std::size_t d = 0;
  std::string method;
  std::size_t trial = 0;
  std::string reference;  // "x_true" or "x_ttls"
  double rel_error = 0.0; // NaN when status != "ok"
  std::optional<double> seconds;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" or an error code name

  bool operator==(const TrialRecord&) const = default;
};

struct BenchResult {
  std::vector<TrialRecord> records;  // ordered by (trial, method)
  Vector reference;                  // x_true, or x_TTLS for Prony
  /// Trial-0 solution per configured method; empty on failure.
  std::vector<Vector> first_solutions;
};

/// Per-trial seed: splitmix64(splitmix64(master) ^ trial). The noise draws use
/// Rng(trial_seed); a method uses Rng::stream(trial_seed, 1 + i) where i is
/// its position in the list TLS, TTLS, QiTTLS, RTTLS.
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

/// Runs every trial and method. Solver failures become records with a
/// status tag and the run continues.
BenchResult run_bench(const BenchConfig& config);

/// Six significant digits in scientific notation; "nan", "inf" otherwise.
std::string format_number(double x);

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_csv(std::istream& in);

/// "# index reference <methods...>" then one row per solution entry, with
/// values printed to 17 significant digits.
void write_solution_plot(std::ostream& out, const BenchConfig& config, const BenchResult& result);

/// Singular values of C = [A, b] padded to n+1 values.
Vector decay_values(const Matrix& a, std::span<const double> b);
/// "# index sigma" then one (1-based index, value) row per value.
void write_decay(std::ostream& out, const Vector& sigma);

struct ConcentrationSummary {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t p = 0;
  double theta = 0.0;
  std::size_t trials = 0;
  std::size_t row_violations = 0;
  std::size_t col_violations = 0;
  double bound = 0.0;  // 1 / (theta^2 p)
  double row_fraction() const { return static_cast<double>(row_violations) / trials; }
  double col_fraction() const { return static_cast<double>(col_violations) / trials; }
};

/// Fixed matrix with entries uniform on [-1, 1] from Rng(seed); trial t uses
/// Rng::stream(seed, t + 1). The row form samples p rows with
/// N_t = M_{i_t} / sqrt(p P_{i_t}) and tests ||M^T M - N^T N||_F >=
/// theta ||M||_F^2; the column form does the same with columns and M M^T.
ConcentrationSummary concentration_suite(std::size_t rows, std::size_t cols, std::size_t p,
                                         double theta, std::size_t trials, std::uint64_t seed);
ConcentrationSummary concentration_suite(const Matrix& m, std::size_t p, double theta,
                                         std::size_t trials, std::uint64_t seed);

void write_concentration(std::ostream& out, const ConcentrationSummary& summary);

struct BoundAuditConfig {
  std::size_t rows = 16;  // power of two
  std::size_t cols = 8;   // n + 1, power of two
  std::size_t d = 2;
  std::size_t k = 2;
  std::size_t q = 2;
  double epsilon = 1e-4;
  double delta = 0.1;
  /// Exhaustive cyclic index plans when true; random sampling with p otherwise.
  bool exhaustive = true;
  std::size_t p = 16;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  /// Planted singular values; empty means 10 * 2^-i * (1 + 0.2 u_i).
  Vector sigma;
};

struct BoundAuditRow {
  std::size_t trial = 0;
  std::size_t l = 0;
  double tau_d = 0.0;
  BoundReport report;
  std::string status = "ok";
};

std::vector<BoundAuditRow> bound_audit(const BoundAuditConfig& config);
void write_bound_audit(std::ostream& out, const std::vector<BoundAuditRow>& rows);

}  // namespace qittls
