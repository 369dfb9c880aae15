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


// qittls_bench: command-line front end for the experiment harness.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qittls/bench.hpp"
#include "qittls/error.hpp"
#include "qittls/problems.hpp"
#include "qittls/random.hpp"
#include "qittls/sample_model.hpp"

namespace {

using namespace qittls;

// Output goes to a file, or to stdout for "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) fail(ErrorCode::kIo, "cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse_method(item));
  }
  if (out.empty()) fail(ErrorCode::kInvalidArgument, "empty method list");
  return out;
}

// Expands "--config FILE" into "--key=value" arguments placed right after
// the subcommand name, so flags given on the command line take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> injected;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) fail(ErrorCode::kIo, "cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      if (trim(line).empty()) continue;
      if (eq == std::string::npos) fail(ErrorCode::kFormat, path + ": expected key = value");
      injected.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
    }
    --i;
  }
  if (!injected.empty()) {
    const auto sub = std::find_if(args.begin(), args.end(),
                                  [](const std::string& a) { return a.rfind("-", 0) != 0; });
    const auto at = sub == args.end() ? args.begin() : sub + 1;
    args.insert(at, injected.begin(), injected.end());
  }
  return args;
}

void add_sketch_options(CLI::App* sub, BenchConfig& config, std::size_t& p) {
  sub->add_option("--epsilon", config.epsilon, "QiSVD accuracy target");
  sub->add_option("--k", config.k, "QiSVD target rank (0 uses d)");
  sub->add_option("--delta", config.delta, "QiSVD failure probability");
  sub->add_option("--p", p, "sketch size (0 uses the theoretical value)");
  sub->add_option("--alpha-constant", config.alpha_constant, "C in alpha = xi / (C k^4)");
  sub->add_option("--rttls-sketch", config.rttls_sketch, "RTTLS sketch size");
  sub->add_option("--trials", config.trials, "number of trials");
  sub->add_option("--seed", config.seed, "master seed");
  sub->add_flag("--timing", config.timing, "record solver wall time in the CSV");
  sub->add_option("--threads", config.threads, "worker threads (0 = all cores)");
}

void run_bench_command(BenchConfig config, std::size_t p, const std::string& methods,
                       const std::string& out, const std::string& plot) {
  config.methods = parse_methods(methods);
  config.p = p == 0 ? std::nullopt : std::optional<std::size_t>(p);
  const BenchResult result = run_bench(config);
  Sink sink(out);
  write_csv(sink.stream(), result.records);
  if (!plot.empty()) {
    Sink plot_sink(plot);
    write_solution_plot(plot_sink.stream(), config, result);
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Quantum-inspired truncated total least squares benchmarks"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value file of flag defaults");

  BenchConfig bench;
  std::size_t bench_p = 200;
  std::string bench_methods = "TTLS,RTTLS,QiTTLS";
  std::string bench_out = "-";
  std::string bench_plot;
  auto* bench_cmd = app.add_subcommand("bench", "noisy trial sweep over a benchmark problem");
  bench_cmd->add_option("--problem", bench.problem, "foxgood|gravity|heat|phillips|baart|deriv2");
  bench_cmd->add_option("--m", bench.m, "problem size");
  bench_cmd->add_option("--d", bench.d, "truncation level");
  bench_cmd->add_option("--eta", bench.eta, "noise level");
  bench_cmd->add_option("--methods", bench_methods, "comma-separated TLS,TTLS,RTTLS,QiTTLS");
  add_sketch_options(bench_cmd, bench, bench_p);
  bench_cmd->add_option("--out", bench_out, "CSV output path or -");
  bench_cmd->add_option("--plot", bench_plot, "solution plot-data path for trial 0");

  BenchConfig prony;
  prony.problem = "prony";
  prony.m = 1000;
  prony.n = 1000;
  prony.d = 12;
  prony.eta = 0.0;
  std::size_t prony_p = 200;
  std::string prony_methods = "TTLS,RTTLS,QiTTLS";
  std::string prony_out = "-";
  std::string prony_plot;
  auto* prony_cmd = app.add_subcommand("prony", "Prony linear prediction system");
  prony_cmd->add_option("--m", prony.m, "rows");
  prony_cmd->add_option("--n", prony.n, "columns");
  prony_cmd->add_option("--t", prony.t_step, "sampling interval");
  prony_cmd->add_option("--d", prony.d, "truncation level");
  prony_cmd->add_option("--poles", prony.pole_file, "pole file (re im gamma_re [gamma_im])");
  prony_cmd->add_option("--methods", prony_methods, "comma-separated methods");
  add_sketch_options(prony_cmd, prony, prony_p);
  prony_cmd->add_option("--out", prony_out, "CSV output path or -");
  prony_cmd->add_option("--plot", prony_plot, "solution plot-data path for trial 0");

  std::size_t conc_rows = 20;
  std::size_t conc_cols = 10;
  std::size_t conc_p = 200;
  double conc_theta = 0.3;
  std::size_t conc_trials = 500;
  std::uint64_t conc_seed = 1;
  std::string conc_out = "-";
  auto* conc_cmd = app.add_subcommand("concentration", "Monte Carlo sampling concentration");
  conc_cmd->add_option("--rows", conc_rows, "matrix rows");
  conc_cmd->add_option("--cols", conc_cols, "matrix columns");
  conc_cmd->add_option("--p", conc_p, "samples per trial");
  conc_cmd->add_option("--theta", conc_theta, "relative deviation threshold");
  conc_cmd->add_option("--trials", conc_trials, "trials");
  conc_cmd->add_option("--seed", conc_seed, "seed");
  conc_cmd->add_option("--out", conc_out, "CSV output path or -");

  BoundAuditConfig audit;
  bool audit_random = false;
  std::string audit_out = "-";
  auto* bounds_cmd = app.add_subcommand("bounds", "error-bound audit on planted toy problems");
  bounds_cmd->add_option("--rows", audit.rows, "rows (power of two)");
  bounds_cmd->add_option("--cols", audit.cols, "columns of C = [A, b] (power of two)");
  bounds_cmd->add_option("--d", audit.d, "truncation level");
  bounds_cmd->add_option("--k", audit.k, "target rank");
  bounds_cmd->add_option("--q", audit.q, "gap index");
  bounds_cmd->add_option("--epsilon", audit.epsilon, "accuracy target");
  bounds_cmd->add_option("--delta", audit.delta, "failure probability");
  bounds_cmd->add_option("--p", audit.p, "sketch size");
  bounds_cmd->add_flag("--random", audit_random, "random sampling instead of exhaustive plans");
  bounds_cmd->add_option("--trials", audit.trials, "trials");
  bounds_cmd->add_option("--seed", audit.seed, "seed");
  bounds_cmd->add_option("--out", audit_out, "CSV output path or -");

  std::string decay_problem = "foxgood";
  std::size_t decay_m = 64;
  double decay_eta = 0.0;
  std::uint64_t decay_seed = 1;
  std::string decay_out = "-";
  auto* decay_cmd = app.add_subcommand("decay", "singular values of C = [A, b]");
  decay_cmd->add_option("--problem", decay_problem, "problem name");
  decay_cmd->add_option("--m", decay_m, "problem size");
  decay_cmd->add_option("--eta", decay_eta, "noise level");
  decay_cmd->add_option("--seed", decay_seed, "noise seed");
  decay_cmd->add_option("--out", decay_out, "output path or -");

  std::string export_problem = "foxgood";
  std::size_t export_m = 256;
  double export_eta = 1e-3;
  std::uint64_t export_seed = 1;
  std::string export_dir = ".";
  auto* export_cmd = app.add_subcommand("export", "write C = [A, b] in the binary matrix format");
  export_cmd->add_option("--problem", export_problem, "problem name");
  export_cmd->add_option("--m", export_m, "problem size");
  export_cmd->add_option("--eta", export_eta, "noise level");
  export_cmd->add_option("--seed", export_seed, "noise seed");
  export_cmd->add_option("--dir", export_dir, "output directory");

  std::vector<std::string> args = expand_config(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (bench_cmd->parsed()) {
    run_bench_command(bench, bench_p, bench_methods, bench_out, bench_plot);
  } else if (prony_cmd->parsed()) {
    run_bench_command(prony, prony_p, prony_methods, prony_out, prony_plot);
  } else if (conc_cmd->parsed()) {
    const ConcentrationSummary s =
        concentration_suite(conc_rows, conc_cols, conc_p, conc_theta, conc_trials, conc_seed);
    Sink sink(conc_out);
    write_concentration(sink.stream(), s);
  } else if (bounds_cmd->parsed()) {
    audit.exhaustive = !audit_random;
    const auto rows = bound_audit(audit);
    Sink sink(audit_out);
    write_bound_audit(sink.stream(), rows);
  } else if (decay_cmd->parsed()) {
    const TestProblem problem = gen_problem(decay_problem, decay_m);
    Rng rng(decay_seed);
    const NoisyProblem noisy = add_noise(problem, decay_eta, rng);
    Sink sink(decay_out);
    write_decay(sink.stream(), decay_values(noisy.A, noisy.b));
  } else if (export_cmd->parsed()) {
    const TestProblem problem = gen_problem(export_problem, export_m);
    Rng rng(export_seed);
    const NoisyProblem noisy = add_noise(problem, export_eta, rng);
    std::filesystem::create_directories(export_dir);
    const std::string stem = export_problem + "_m" + std::to_string(export_m);
    const std::filesystem::path dir(export_dir);
    save_matrix((dir / (stem + ".qsmx")).string(), augment(noisy.A, noisy.b));
    Sink manifest((dir / (stem + ".manifest")).string());
    manifest.stream() << "name = " << export_problem << "\nm = " << export_m
                      << "\neta = " << format_number(export_eta) << "\nseed = " << export_seed
                      << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qittls::Error& e) {
    std::cerr << "error [" << qittls::to_string(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
