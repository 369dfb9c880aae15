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


#include "qittls/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "qittls/error.hpp"
#include "qittls/problems.hpp"
#include "qittls/qisvd.hpp"
#include "qittls/random.hpp"
#include "qittls/sample_model.hpp"

namespace qittls {

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return splitmix64(splitmix64(master) ^ static_cast<std::uint64_t>(trial));
}

namespace {

struct Instance {
  Matrix A;
  Vector b;
};

struct MethodOutcome {
  Vector x;
  double seconds = 0.0;
  std::string status = "ok";
};

MethodOutcome run_method(const BenchConfig& config, Method method, const Instance& inst,
                         std::uint64_t seed) {
  MethodOutcome out;
  Rng rng = Rng::stream(seed, 1 + static_cast<std::uint64_t>(method));
  const std::size_t k = config.k == 0 ? config.d : config.k;
  try {
    // Parameter derivation and the sample model build are input preparation,
    // so the clock covers the solve only.
    std::optional<QiSvdParams> params;
    std::optional<SampleMatrix> model;
    if (method == Method::kQiTtls) {
      params = derive_params(config.epsilon, k, config.delta, config.p, config.alpha_constant);
      model.emplace(augment(inst.A, inst.b));
    }
    const auto start = std::chrono::steady_clock::now();
    TtlsSolution sol;
    switch (method) {
      case Method::kTls: sol = tls_solve(inst.A, inst.b); break;
      case Method::kTtls: sol = ttls_solve(inst.A, inst.b, config.d); break;
      case Method::kRttls:
        sol = rttls_solve(inst.A, inst.b, config.d, config.rttls_sketch, rng);
        break;
      case Method::kQiTtls: sol = qittls_solve(*model, *params, config.d, rng); break;
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.x = std::move(sol.x);
  } catch (const Error& e) {
    out.status = std::string(to_string(e.code()));
    out.x.clear();
  }
  return out;
}

template <typename F>
void parallel_for(std::size_t count, unsigned threads, F body) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

TrialRecord make_record(const BenchConfig& config, std::size_t m, Method method,
                        std::size_t trial, const std::string& reference, std::uint64_t seed) {
  TrialRecord r;
  r.problem = config.problem;
  r.m = m;
  r.d = config.d;
  r.method = std::string(to_string(method));
  r.trial = trial;
  r.reference = reference;
  r.seed = seed;
  return r;
}

void fill_error(TrialRecord& record, const MethodOutcome& outcome, const Vector& reference,
                bool timing) {
  record.status = outcome.status;
  if (timing) record.seconds = outcome.seconds;
  if (outcome.status != "ok") {
    record.rel_error = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  try {
    record.rel_error = rel_err_inf(outcome.x, reference);
  } catch (const Error& e) {
    record.status = std::string(to_string(e.code()));
    record.rel_error = std::numeric_limits<double>::quiet_NaN();
  }
}

PronySpec prony_spec(const BenchConfig& config) {
  const std::size_t n = config.n == 0 ? config.m : config.n;
  return config.pole_file.empty()
             ? default_prony_spec(config.m, n, config.t_step)
             : read_pole_file(config.pole_file, config.m, n, config.t_step);
}

BenchResult run_prony(const BenchConfig& config) {
  const TestProblem problem = gen_prony(prony_spec(config));
  const Instance inst{problem.A, problem.b};
  BenchResult result;
  const std::size_t nm = config.methods.size();

  // The system is noiseless, so TTLS is solved once and reused as the
  // reference for every trial.
  const MethodOutcome ttls = run_method(config, Method::kTtls, inst, trial_seed(config.seed, 0));
  if (ttls.status != "ok") {
    fail(ErrorCode::kRankDeficient, "Prony: TTLS reference failed: " + ttls.status);
  }
  result.reference = ttls.x;

  result.records.resize(config.trials * nm);
  result.first_solutions.assign(nm, Vector{});
  parallel_for(config.trials, config.threads, [&](std::size_t trial) {
    const std::uint64_t seed = trial_seed(config.seed, trial);
    for (std::size_t mi = 0; mi < nm; ++mi) {
      const Method method = config.methods[mi];
      const MethodOutcome outcome =
          method == Method::kTtls ? ttls : run_method(config, method, inst, seed);
      TrialRecord& record = result.records[trial * nm + mi];
      record = make_record(config, config.m, method, trial, "x_ttls", seed);
      fill_error(record, outcome, result.reference, config.timing);
      if (trial == 0) result.first_solutions[mi] = outcome.x;
    }
  });
  return result;
}

}  // namespace

BenchResult run_bench(const BenchConfig& config) {
  if (config.trials == 0) fail(ErrorCode::kInvalidArgument, "trials must be at least 1");
  if (config.methods.empty()) fail(ErrorCode::kInvalidArgument, "method set is empty");
  if (config.problem == "prony") return run_prony(config);

  const TestProblem problem = gen_problem(config.problem, config.m);
  BenchResult result;
  result.reference = problem.x_true;
  const std::size_t nm = config.methods.size();
  result.records.resize(config.trials * nm);
  result.first_solutions.assign(nm, Vector{});
  parallel_for(config.trials, config.threads, [&](std::size_t trial) {
    const std::uint64_t seed = trial_seed(config.seed, trial);
    Rng noise_rng(seed);
    const NoisyProblem noisy = add_noise(problem, config.eta, noise_rng);
    const Instance inst{noisy.A, noisy.b};
    for (std::size_t mi = 0; mi < nm; ++mi) {
      const Method method = config.methods[mi];
      const MethodOutcome outcome = run_method(config, method, inst, seed);
      TrialRecord& record = result.records[trial * nm + mi];
      record = make_record(config, config.m, method, trial, "x_true", seed);
      fill_error(record, outcome, result.reference, config.timing);
      if (trial == 0) result.first_solutions[mi] = outcome.x;
    }
  });
  return result;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", x);
  return buf;
}

namespace {

// Plot files carry enough digits to read back the exact doubles.
std::string format_exact(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

constexpr const char* kCsvHeader = "problem,m,d,method,trial,reference,rel_error,seconds,seed,status";

double parse_number(const std::string& field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) fail(ErrorCode::kFormat, "bad number '" + field + "'");
  return v;
}

std::size_t parse_count(const std::string& field) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(field, &used);
  if (used != field.size()) fail(ErrorCode::kFormat, "bad integer '" + field + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.problem << ',' << r.m << ',' << r.d << ',' << r.method << ',' << r.trial << ','
        << r.reference << ',' << format_number(r.rel_error) << ','
        << (r.seconds ? format_number(*r.seconds) : "na") << ',' << r.seed << ',' << r.status
        << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "CSV write failed");
}

std::vector<TrialRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) fail(ErrorCode::kFormat, "CSV: bad header");
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) f.push_back(cell);
    if (f.size() != 10) fail(ErrorCode::kFormat, "CSV: expected 10 fields in '" + line + "'");
    try {
      TrialRecord r;
      r.problem = f[0];
      r.m = parse_count(f[1]);
      r.d = parse_count(f[2]);
      r.method = f[3];
      r.trial = parse_count(f[4]);
      r.reference = f[5];
      r.rel_error = parse_number(f[6]);
      if (f[7] != "na") r.seconds = parse_number(f[7]);
      r.seed = std::stoull(f[8]);
      r.status = f[9];
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      fail(ErrorCode::kFormat, "CSV: malformed record '" + line + "'");
    }
  }
  return out;
}

void write_solution_plot(std::ostream& out, const BenchConfig& config, const BenchResult& result) {
  out << "# index " << (config.problem == "prony" ? "x_ttls_reference" : "x_true");
  for (const Method m : config.methods) out << ' ' << to_string(m);
  out << '\n';
  for (std::size_t i = 0; i < result.reference.size(); ++i) {
    out << (i + 1) << ' ' << format_exact(result.reference[i]);
    for (const Vector& x : result.first_solutions) {
      out << ' ' << (i < x.size() ? format_exact(x[i]) : std::string("nan"));
    }
    out << '\n';
  }
}

Vector decay_values(const Matrix& a, std::span<const double> b) {
  const Matrix c = augment(a, b);
  Vector sigma = singular_values(c);
  sigma.resize(c.cols(), 0.0);
  return sigma;
}

void write_decay(std::ostream& out, const Vector& sigma) {
  out << "# index sigma\n";
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    out << (i + 1) << ' ' << format_exact(sigma[i]) << '\n';
  }
}

ConcentrationSummary concentration_suite(std::size_t rows, std::size_t cols, std::size_t p,
                                         double theta, std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = rng.uniform(-1.0, 1.0);
  return concentration_suite(m, p, theta, trials, seed);
}

ConcentrationSummary concentration_suite(const Matrix& m, std::size_t p, double theta,
                                         std::size_t trials, std::uint64_t seed) {
  if (!(theta > 0.0)) fail(ErrorCode::kInvalidArgument, "theta must be positive");
  if (p == 0 || trials == 0) fail(ErrorCode::kInvalidArgument, "p and trials must be positive");
  const SampleMatrix model(m);
  const double frob2 = model.frob2();
  const Matrix mtm = matmul_tn(m, m);
  const Matrix mmt = matmul(m, transpose(m));
  ConcentrationSummary out;
  out.rows = m.rows();
  out.cols = m.cols();
  out.p = p;
  out.theta = theta;
  out.trials = trials;
  out.bound = 1.0 / (theta * theta * static_cast<double>(p));
  const double pd = static_cast<double>(p);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, t + 1);
    Matrix ntn(m.cols(), m.cols());
    for (std::size_t s = 0; s < p; ++s) {
      const std::size_t i = model.sample_row(rng);
      const double w = 1.0 / (pd * model.row_probability(i));
      const auto r = model.row(i);
      for (std::size_t a = 0; a < r.size(); ++a) {
        for (std::size_t b = 0; b < r.size(); ++b) ntn(a, b) += w * r[a] * r[b];
      }
    }
    if (frob_norm(subtract(mtm, ntn)) >= theta * frob2) ++out.row_violations;
    Matrix nnt(m.rows(), m.rows());
    for (std::size_t s = 0; s < p; ++s) {
      const std::size_t j = model.sample_col(rng);
      const double w = 1.0 / (pd * model.col_probability(j));
      const auto c = model.col(j);
      for (std::size_t a = 0; a < c.size(); ++a) {
        for (std::size_t b = 0; b < c.size(); ++b) nnt(a, b) += w * c[a] * c[b];
      }
    }
    if (frob_norm(subtract(mmt, nnt)) >= theta * frob2) ++out.col_violations;
  }
  return out;
}

void write_concentration(std::ostream& out, const ConcentrationSummary& s) {
  out << "form,rows,cols,p,theta,trials,violations,fraction,bound\n";
  const auto line = [&](const char* form, std::size_t violations, double fraction) {
    out << form << ',' << s.rows << ',' << s.cols << ',' << s.p << ',' << format_number(s.theta)
        << ',' << s.trials << ',' << violations << ',' << format_number(fraction) << ','
        << format_number(s.bound) << '\n';
  };
  line("row", s.row_violations, s.row_fraction());
  line("column", s.col_violations, s.col_fraction());
}

std::vector<BoundAuditRow> bound_audit(const BoundAuditConfig& config) {
  if (config.trials == 0) fail(ErrorCode::kInvalidArgument, "trials must be at least 1");
  const std::size_t n = config.cols - 1;
  std::vector<BoundAuditRow> rows(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    BoundAuditRow& row = rows[t];
    row.trial = t;
    Rng rng = Rng::stream(config.seed, t);
    Vector sigma = config.sigma;
    if (sigma.empty()) {
      sigma.resize(config.cols);
      for (std::size_t i = 0; i < sigma.size(); ++i) {
        sigma[i] = 10.0 * std::ldexp(1.0, -static_cast<int>(i)) * (1.0 + 0.2 * rng.uniform());
      }
      std::sort(sigma.begin(), sigma.end(), std::greater<>());
    }
    try {
      const Matrix c = planted_spectrum_toy(config.rows, config.cols, sigma, rng);
      const Matrix a = c.block(0, 0, c.rows(), n);
      const Vector b = c.col(n);
      const TtlsSolution exact = ttls_solve(a, b, config.d);
      const QiSvdParams params =
          derive_params(config.epsilon, config.k, config.delta, config.p);
      const SampleMatrix model(c);
      const ApproxRightSingular sketch =
          config.exhaustive
              ? qisvd_with_indices(model, params, cyclic_indices(c.rows(), config.p),
                                   cyclic_indices(c.cols(), config.p))
              : qisvd(model, params, rng);
      const TtlsSolution approx = qittls_from_sketch(sketch, config.d);
      row.l = sketch.l;
      row.tau_d = exact.tau_d;
      const SubspaceBound sub =
          subspace_error_bound(exact.sigma, config.epsilon, config.k, params.xi, config.q);
      row.report = solution_error_bound(exact.sigma, config.d, sub, exact.tau_d, norm2(b),
                                        norm2(exact.x));
      row.report.observed = rel_err_2(approx.x, exact.x);
    } catch (const Error& e) {
      row.status = std::string(to_string(e.code()));
    }
  }
  return rows;
}

void write_bound_audit(std::ostream& out, const std::vector<BoundAuditRow>& rows) {
  out << "trial,l,tau_d,epsilon_v,eta,gap_ok,tau_ok,b_ok,x_ok,hypothesis_ok,rhs,observed,status\n";
  for (const auto& r : rows) {
    const BoundReport& b = r.report;
    out << r.trial << ',' << r.l << ',' << format_number(r.tau_d) << ','
        << format_number(b.epsilon_v) << ',' << format_number(b.gap_eta) << ',' << b.gap_ok << ','
        << b.tau_ok << ',' << b.b_ok << ',' << b.x_ok << ',' << b.hypothesis_ok << ','
        << format_number(b.rhs) << ',' << format_number(b.observed) << ',' << r.status << '\n';
  }
}

}  // namespace qittls
