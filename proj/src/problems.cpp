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


#include "qittls/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qittls/error.hpp"

namespace qittls {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
struct GaussRule {
  Vector nodes;
  Vector weights;
};

GaussRule gauss_legendre(std::size_t n) {
  GaussRule rule{Vector(n), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

template <typename F>
double integrate(const GaussRule& rule, double lo, double hi, F f) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

// Discretization residuals of the quadrature generators fall off as 1/n^2;
// their consistency tolerance is a measured constant over n^2 with a factor
// of two to spare.
double h_inv2(std::size_t n) { return static_cast<double>(n) * static_cast<double>(n); }

double midpoint(std::size_t i, double h) { return h * (static_cast<double>(i) + 0.5); }

Matrix symmetric_toeplitz(const Vector& first_row) {
  const std::size_t n = first_row.size();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = first_row[i > j ? i - j : j - i];
  }
  return out;
}

TestProblem foxgood(std::size_t n) {
  const double h = 1.0 / static_cast<double>(n);
  TestProblem p{"foxgood", Matrix(n, n), Vector(n), Vector(n), 0.3 / h_inv2(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double s = midpoint(i, h);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = midpoint(j, h);
      p.A(i, j) = h * std::sqrt(s * s + t * t);
    }
    p.x_true[i] = s;
    p.b[i] = (std::pow(1.0 + s * s, 1.5) - s * s * s) / 3.0;
  }
  return p;
}

TestProblem gravity(std::size_t n) {
  const double h = 1.0 / static_cast<double>(n);
  const double d = 0.25;
  TestProblem p{"gravity", Matrix(n, n), Vector(n), Vector(n), 1e-12};
  for (std::size_t i = 0; i < n; ++i) {
    const double s = midpoint(i, h);
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = s - midpoint(j, h);
      p.A(i, j) = h * d / std::pow(d * d + diff * diff, 1.5);
    }
    p.x_true[i] = std::sin(kPi * s) + 0.5 * std::sin(2.0 * kPi * s);
  }
  p.b = matvec(p.A, p.x_true);
  return p;
}

TestProblem heat(std::size_t n) {
  if (n % 2 != 0) fail(ErrorCode::kInvalidArgument, "heat: size must be even");
  const double h = 1.0 / static_cast<double>(n);
  const double kappa = 1.0;
  const double c = h / (2.0 * kappa * std::sqrt(kPi));
  const double d = 1.0 / (4.0 * kappa * kappa);
  Vector kernel(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = midpoint(i, h);
    kernel[i] = c * std::pow(t, -1.5) * std::exp(-d / t);
  }
  TestProblem p{"heat", Matrix(n, n), Vector(n), Vector(n, 0.0), 1e-12};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) p.A(i, j) = kernel[i - j];
  }
  for (std::size_t i = 1; i <= n / 2; ++i) {
    const double ti = static_cast<double>(i) * 20.0 / static_cast<double>(n);
    double value = 0.0;
    if (ti < 2.0) {
      value = 0.75 * ti * ti / 4.0;
    } else if (ti < 3.0) {
      value = 0.75 + (ti - 2.0) * (3.0 - ti);
    } else {
      value = 0.75 * std::exp(-(ti - 3.0) * 2.0);
    }
    p.x_true[i - 1] = value;
  }
  p.b = matvec(p.A, p.x_true);
  return p;
}

TestProblem phillips(std::size_t n) {
  if (n % 4 != 0) fail(ErrorCode::kInvalidArgument, "phillips: size must be a multiple of 4");
  const double nd = static_cast<double>(n);
  const double h = 12.0 / nd;
  const std::size_t n4 = n / 4;
  const double scale = 9.0 / (h * kPi * kPi);
  // cos((k - 1) 4 pi / n) for k = 0..n4+1, i.e. angles -1..n4.
  Vector co(n4 + 2);
  for (std::size_t k = 0; k < co.size(); ++k) {
    co[k] = std::cos((static_cast<double>(k) - 1.0) * 4.0 * kPi / nd);
  }
  Vector r1(n, 0.0);
  for (std::size_t k = 0; k < n4; ++k) r1[k] = h + scale * (2.0 * co[k + 1] - co[k] - co[k + 2]);
  r1[n4] = h / 2.0 + scale * (std::cos(4.0 * kPi / nd) - 1.0);

  TestProblem p{"phillips", symmetric_toeplitz(r1), Vector(n, 0.0), Vector(n, 0.0), 8.0 / h_inv2(n)};
  const double c = kPi / 3.0;
  const auto primitive = [c](double t) {
    // Antiderivative of g(s) = (6 - |s|)(1 + cos(c s) / 2) + 9 sin(c |s|) / (2 pi).
    const double at = std::abs(t);
    return t * (6.0 - at / 2.0) + ((3.0 - at / 2.0) * std::sin(c * t) -
                                   2.0 / c * (std::cos(c * t) - 1.0)) / c;
  };
  for (std::size_t i = n / 2 + 1; i <= n; ++i) {
    const double t1 = -6.0 + static_cast<double>(i) * h;
    const double t2 = t1 - h;
    p.b[i - 1] = primitive(t1) - primitive(t2);
    p.b[n - i] = p.b[i - 1];
  }
  for (double& v : p.b) v /= std::sqrt(h);
  // x_j = (1/sqrt(h)) * integral of 1 + cos(c t) over the box, for boxes
  // inside |t| < 3.
  for (std::size_t k = 0; k < n4; ++k) {
    const double lo = static_cast<double>(k) * h;
    const double hi = lo + h;
    const double value = (h + (std::sin(c * hi) - std::sin(c * lo)) / c) / std::sqrt(h);
    p.x_true[2 * n4 + k] = value;
    p.x_true[2 * n4 - 1 - k] = value;
  }
  return p;
}

TestProblem baart(std::size_t n) {
  const double nd = static_cast<double>(n);
  const double hs = kPi / (2.0 * nd);
  const double ht = kPi / nd;
  const double c = 1.0 / (3.0 * std::sqrt(2.0));
  TestProblem p{"baart", Matrix(n, n), Vector(n), Vector(n), 0.6 / h_inv2(n)};
  // Exact integral over box i in s of exp(s * co).
  const auto box = [&](std::size_t i, double co) {
    const double s0 = static_cast<double>(i) * hs;
    const double s1 = s0 + hs;
    if (std::abs(co) < 1e-14) return hs;
    return (std::exp(s1 * co) - std::exp(s0 * co)) / co;
  };
  for (std::size_t j = 0; j < n; ++j) {
    const double jd = static_cast<double>(j);
    const double co1 = std::cos(jd * ht);
    const double co2 = std::cos((jd + 0.5) * ht);
    const double co3 = std::cos((jd + 1.0) * ht);
    for (std::size_t i = 0; i < n; ++i) {
      p.A(i, j) = c * (box(i, co1) + 4.0 * box(i, co2) + box(i, co3));
    }
    p.x_true[j] = (std::cos(jd * ht) - std::cos((jd + 1.0) * ht)) / std::sqrt(ht);
  }
  const GaussRule rule = gauss_legendre(20);
  const auto g = [](double s) { return s == 0.0 ? 2.0 : 2.0 * std::sinh(s) / s; };
  for (std::size_t i = 0; i < n; ++i) {
    const double s0 = static_cast<double>(i) * hs;
    p.b[i] = integrate(rule, s0, s0 + hs, g) / std::sqrt(hs);
  }
  return p;
}

TestProblem deriv2(std::size_t n) {
  const double h = 1.0 / static_cast<double>(n);
  const double h2 = h * h;
  const double h32 = h * std::sqrt(h);
  TestProblem p{"deriv2", Matrix(n, n), Vector(n), Vector(n), 1e-12};
  for (std::size_t i = 1; i <= n; ++i) {
    const double id = static_cast<double>(i);
    p.A(i - 1, i - 1) = h2 * ((id * id - id + 0.25) * h - (id - 2.0 / 3.0));
    for (std::size_t j = 1; j < i; ++j) {
      const double value = h2 * (static_cast<double>(j) - 0.5) * ((id - 0.5) * h - 1.0);
      p.A(i - 1, j - 1) = value;
      p.A(j - 1, i - 1) = value;
    }
    p.b[i - 1] = h32 * (id - 0.5) * ((id * id + (id - 1.0) * (id - 1.0)) * h2 / 2.0 - 1.0) / 6.0;
    p.x_true[i - 1] = h32 * (id - 0.5);
  }
  return p;
}

}  // namespace

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {"foxgood", "gravity", "heat",
                                                 "phillips", "baart", "deriv2"};
  return names;
}

TestProblem gen_problem(std::string_view name, std::size_t m) {
  if (m < 8) fail(ErrorCode::kInvalidArgument, "problem size must be at least 8");
  if (name == "foxgood") return foxgood(m);
  if (name == "gravity") return gravity(m);
  if (name == "heat") return heat(m);
  if (name == "phillips") return phillips(m);
  if (name == "baart") return baart(m);
  if (name == "deriv2") return deriv2(m);
  fail(ErrorCode::kUnknownProblem, "unknown problem '" + std::string(name) + "'");
}

NoisyProblem add_noise(const TestProblem& problem, double eta, Rng& rng) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    fail(ErrorCode::kInvalidArgument, "noise level must be finite and nonnegative");
  }
  NoisyProblem out{problem.A, problem.b};
  if (eta == 0.0) return out;
  Matrix g(problem.A.rows(), problem.A.cols());
  for (double& x : g.data()) x = rng.uniform(-1.0, 1.0);
  Vector zeta(problem.b.size());
  for (double& x : zeta) x = rng.uniform(-1.0, 1.0);
  const double ga = eta * frob_norm(problem.A) / frob_norm(g);
  const double gb = eta * norm2(problem.b) / norm2(zeta);
  auto a = out.A.data();
  const auto gd = g.data();
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += ga * gd[k];
  for (std::size_t i = 0; i < out.b.size(); ++i) out.b[i] += gb * zeta[i];
  return out;
}

PronySpec default_prony_spec(std::size_t m, std::size_t n, double t_step) {
  PronySpec signal;
  signal.m = m;
  signal.n = n;
  signal.t_step = t_step;
  const std::vector<std::complex<double>> upper = {
      {-0.082, 0.926}, {-0.147, 2.874}, {-0.188, 4.835},
      {-0.220, 6.800}, {-0.247, 8.767}, {-0.270, 10.733}};
  for (const auto& lambda : upper) {
    signal.poles.push_back(lambda);
    signal.residues.push_back(1.0);
    signal.poles.push_back(std::conj(lambda));
    signal.residues.push_back(1.0);
  }
  return signal;
}

PronySpec read_pole_file(const std::string& path, std::size_t m, std::size_t n, double t_step) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open pole file " + path);
  PronySpec signal;
  signal.m = m;
  signal.n = n;
  signal.t_step = t_step;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> values;
    double v = 0.0;
    while (fields >> v) values.push_back(v);
    if (!fields.eof()) {
      fail(ErrorCode::kFormat, path + ":" + std::to_string(lineno) + ": malformed number");
    }
    if (values.empty()) continue;
    if (values.size() < 3 || values.size() > 4) {
      fail(ErrorCode::kFormat, path + ":" + std::to_string(lineno) +
                                   ": expected 're im gamma_re [gamma_im]'");
    }
    signal.poles.emplace_back(values[0], values[1]);
    signal.residues.emplace_back(values[2], values.size() == 4 ? values[3] : 0.0);
  }
  if (signal.poles.empty()) fail(ErrorCode::kFormat, "pole file " + path + " lists no poles");
  return signal;
}

namespace {

void check_conjugate_closure(const PronySpec& signal) {
  const std::size_t count = signal.poles.size();
  if (count == 0) fail(ErrorCode::kInvalidArgument, "Prony: no poles");
  if (signal.residues.size() != count) {
    fail(ErrorCode::kInvalidArgument, "Prony: one residue per pole required");
  }
  std::vector<bool> used(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    if (signal.residues[i] == std::complex<double>(0.0)) {
      fail(ErrorCode::kInvalidArgument, "Prony: zero residue");
    }
    if (used[i]) continue;
    const auto target = std::conj(signal.poles[i]);
    const auto target_res = std::conj(signal.residues[i]);
    bool found = false;
    for (std::size_t j = 0; j < count && !found; ++j) {
      if (used[j] && j != i) continue;
      if (j == i && signal.poles[i].imag() != 0.0) continue;
      const double scale = 1.0 + std::abs(target);
      if (std::abs(signal.poles[j] - target) <= 1e-12 * scale &&
          std::abs(signal.residues[j] - target_res) <= 1e-12 * (1.0 + std::abs(target_res))) {
        used[i] = true;
        used[j] = true;
        found = true;
      }
    }
    if (!found) {
      std::ostringstream msg;
      msg << "Prony: pole " << signal.poles[i] << " with residue " << signal.residues[i]
          << " has no conjugate partner";
      fail(ErrorCode::kInvalidArgument, msg.str());
    }
  }
}

}  // namespace

Vector prony_signal(const PronySpec& signal, std::size_t count) {
  check_conjugate_closure(signal);
  Vector y(count);
  for (std::size_t l = 0; l < count; ++l) {
    std::complex<double> sum = 0.0;
    double magnitude = 0.0;
    for (std::size_t j = 0; j < signal.poles.size(); ++j) {
      const auto term =
          signal.residues[j] * std::exp(signal.poles[j] * (signal.t_step * static_cast<double>(l)));
      sum += term;
      magnitude += std::abs(term);
    }
    if (std::abs(sum.imag()) > 1e-10 * std::max(1.0, magnitude)) {
      fail(ErrorCode::kInvalidArgument, "Prony: signal is not real at sample " + std::to_string(l));
    }
    y[l] = sum.real();
  }
  return y;
}

TestProblem gen_prony(const PronySpec& signal) {
  const std::size_t m = signal.m;
  const std::size_t n = signal.n;
  const std::size_t poles = signal.poles.size();
  if (n == 0) fail(ErrorCode::kInvalidArgument, "Prony: n must be positive");
  if (m < n || m < poles) fail(ErrorCode::kInvalidArgument, "Prony: need m >= n and m >= poles");
  const Vector y = prony_signal(signal, m + n);
  TestProblem p{"prony", Matrix(m, n), Vector(m), Vector{}, 1e-8};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) p.A(i, j) = y[i + j];
    p.b[i] = -y[i + n];
  }
  const Vector sigma = singular_values(p.A);
  const std::size_t rank = numerical_rank(sigma, 1e-8);
  if (rank != std::min(n, poles)) {
    fail(ErrorCode::kRankDeficient, "Prony: numerical rank " + std::to_string(rank) +
                                        " differs from min(n, poles) = " +
                                        std::to_string(std::min(n, poles)));
  }
  return p;
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Sylvester Hadamard matrix scaled to be orthogonal, with rows permuted and
// columns multiplied by random signs.
Matrix random_hadamard(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[static_cast<std::size_t>(rng.index(i))]);
  }
  Vector sign(n);
  for (double& s : sign) s = rng.uniform() < 0.5 ? -1.0 : 1.0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool odd = (std::popcount(static_cast<std::uint64_t>(perm[i] & j)) & 1) != 0;
      h(i, j) = (odd ? -scale : scale) * sign[j];
    }
  }
  return h;
}

}  // namespace

Matrix planted_spectrum_toy(std::size_t m, std::size_t n1, const Vector& sigma, Rng& rng) {
  if (!is_power_of_two(m) || !is_power_of_two(n1) || m < n1 || sigma.size() > n1) {
    fail(ErrorCode::kInvalidArgument,
         "planted toy: m and n1 must be powers of two with m >= n1 >= sigma.size()");
  }
  const Matrix q1 = random_hadamard(m, rng);
  const Matrix q2 = random_hadamard(n1, rng);
  Matrix c(m, n1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < sigma.size(); ++k) sum += q1(i, k) * sigma[k] * q2(j, k);
      c(i, j) = sum;
    }
  }
  return c;
}

double rel_err_inf(std::span<const double> x, std::span<const double> x_ref) {
  if (x.size() != x_ref.size()) fail(ErrorCode::kInvalidArgument, "length mismatch");
  const double ref = inf_norm_vec(x_ref);
  if (!(ref > 0.0)) fail(ErrorCode::kInvalidArgument, "zero reference vector");
  double diff = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) diff = std::max(diff, std::abs(x[i] - x_ref[i]));
  return diff / ref;
}

}  // namespace qittls
