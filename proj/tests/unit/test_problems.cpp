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


#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "qittls/error.hpp"
#include "qittls/problems.hpp"

using namespace qittls;

namespace {

std::map<std::string, Vector> load_singular_fixture() {
  std::ifstream in(testing::fixture_path("singular_values_m32.txt"));
  REQUIRE(in.good());
  std::map<std::string, Vector> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string name;
    fields >> name;
    Vector values;
    double v = 0.0;
    while (fields >> v) values.push_back(v);
    out[name] = values;
  }
  return out;
}

}  // namespace

TEST_CASE("generators: names, shapes and argument checks") {
  CHECK(problem_names().size() == 6);
  for (const std::string& name : problem_names()) {
    CAPTURE(name);
    const TestProblem p = gen_problem(name, 16);
    CHECK(p.name == name);
    CHECK(p.A.rows() == 16);
    CHECK(p.A.cols() == 16);
    CHECK(p.b.size() == 16);
    CHECK(p.x_true.size() == 16);
    CHECK_THROWS_AS(gen_problem(name, 4), Error);
  }
  try {
    gen_problem("shaw", 16);
    FAIL("expected unknown problem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownProblem);
  }
  CHECK_THROWS_AS(gen_problem("heat", 17), Error);
  CHECK_THROWS_AS(gen_problem("phillips", 18), Error);
}

TEST_CASE("generators: foxgood singular values decay fast") {
  const Vector s = singular_values(gen_problem("foxgood", 32).A);
  std::size_t first_small = s.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 1e-10 * s[0]) {
      first_small = i + 1;
      break;
    }
  }
  CHECK(first_small <= 16);
}

TEST_CASE("generators: deriv2 is symmetric") {
  const Matrix a = gen_problem("deriv2", 16).A;
  CHECK(testing::max_abs_diff(a, transpose(a)) <= 1e-12);
}

TEST_CASE("generators: consistency residuals") {
  for (const std::string& name : problem_names()) {
    for (const std::size_t m : {8u, 16u, 32u, 64u, 128u}) {
      CAPTURE(name);
      CAPTURE(m);
      const TestProblem p = gen_problem(name, m);
      Vector r = matvec(p.A, p.x_true);
      for (std::size_t i = 0; i < m; ++i) r[i] -= p.b[i];
      CHECK(norm2(r) <= p.consistency_tol * norm2(p.b));
    }
  }
}

TEST_CASE("generators: singular value fixture") {
  const std::map<std::string, Vector> fixture = load_singular_fixture();
  REQUIRE(fixture.size() == 6);
  for (const std::string& name : problem_names()) {
    CAPTURE(name);
    const Vector s = singular_values(gen_problem(name, 32).A);
    const Vector& ref = fixture.at(name);
    REQUIRE(ref.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(std::abs(s[i] - ref[i]) <= 1e-10 * ref[0]);
    }
  }
}

TEST_CASE("generators: deterministic bytes") {
  for (const std::string& name : problem_names()) {
    const TestProblem a = gen_problem(name, 24);
    const TestProblem b = gen_problem(name, 24);
    CHECK(a.A == b.A);
    CHECK(a.b == b.b);
    CHECK(a.x_true == b.x_true);
  }
}

TEST_CASE("noise: exact scaling identities") {
  const TestProblem p = gen_problem("gravity", 32);
  {
    Rng rng(1);
    const NoisyProblem same = add_noise(p, 0.0, rng);
    CHECK(same.A == p.A);
    CHECK(same.b == p.b);
  }
  Rng rng(2);
  // Below about 1e-3 the subtraction itself cancels more than four digits.
  for (const double eta : {1e-3, 0.1, 2.0}) {
    CAPTURE(eta);
    const NoisyProblem noisy = add_noise(p, eta, rng);
    CHECK(std::abs(frob_norm(subtract(noisy.A, p.A)) - eta * frob_norm(p.A)) <=
          1e-12 * eta * frob_norm(p.A));
    Vector db = noisy.b;
    for (std::size_t i = 0; i < db.size(); ++i) db[i] -= p.b[i];
    CHECK(std::abs(norm2(db) - eta * norm2(p.b)) <= 1e-12 * eta * norm2(p.b));
  }
  Rng r1(3);
  Rng r2(3);
  CHECK(add_noise(p, 1e-3, r1).A == add_noise(p, 1e-3, r2).A);
}

TEST_CASE("prony: built-in pole set") {
  const PronySpec signal = default_prony_spec(40, 30);
  CHECK(signal.poles.size() == 12);
  CHECK(signal.poles[0] == std::complex<double>(-0.082, 0.926));
  CHECK(signal.poles[1] == std::complex<double>(-0.082, -0.926));
  CHECK(signal.t_step == 0.2);
  const TestProblem p = gen_prony(signal);
  CHECK(numerical_rank(singular_values(p.A), 1e-8) == 12);
  // Hankel structure and b = -a_{n+1}.
  const Vector y = prony_signal(signal, 70);
  CHECK(p.A(3, 5) == y[8]);
  CHECK(p.b[2] == -y[32]);
}

TEST_CASE("prony: rank law and compatibility") {
  for (const std::size_t n : {6u, 12u, 20u}) {
    CAPTURE(n);
    const TestProblem p = gen_prony(default_prony_spec(60, n));
    CHECK(numerical_rank(singular_values(p.A), 1e-8) == std::min<std::size_t>(n, 12));
    if (n >= 12) {
      const Vector x = matvec(pinv(p.A, 1e-10), p.b);
      Vector r = matvec(p.A, x);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.b[i];
      CHECK(norm2(r) <= 1e-8 * norm2(p.b));
    }
  }
}

TEST_CASE("prony: constant and single-pair signals") {
  PronySpec constant;
  constant.poles = {0.0};
  constant.residues = {1.0};
  constant.m = 10;
  constant.n = 4;
  for (const double y : prony_signal(constant, 30)) CHECK(y == 1.0);
  CHECK(numerical_rank(singular_values(gen_prony(constant).A), 1e-8) == 1);

  PronySpec pair;
  const std::complex<double> lambda(-0.3, 2.1);
  pair.poles = {lambda, std::conj(lambda)};
  pair.residues = {1.5, 1.5};
  pair.t_step = 0.2;
  const Vector y = prony_signal(pair, 50);
  for (std::size_t l = 0; l < 50; ++l) {
    const double tl = 0.2 * static_cast<double>(l);
    const double expected = 2.0 * 1.5 * std::exp(-0.3 * tl) * std::cos(2.1 * tl);
    CHECK(std::abs(y[l] - expected) <= 1e-10);
  }

  PronySpec open = pair;
  open.poles.pop_back();
  open.residues.pop_back();
  CHECK_THROWS_AS(prony_signal(open, 5), Error);
  PronySpec zero = pair;
  zero.residues = {0.0, 0.0};
  CHECK_THROWS_AS(prony_signal(zero, 5), Error);
}

TEST_CASE("prony: pole files") {
  const PronySpec file =
      read_pole_file(testing::fixture_path("poles_default.txt"), 50, 40, 0.2);
  const PronySpec builtin = default_prony_spec(50, 40);
  CHECK(gen_prony(file).A == gen_prony(builtin).A);
  CHECK_THROWS_AS(gen_prony(read_pole_file(testing::fixture_path("poles_unpaired.txt"), 20, 10, 0.2)),
                  Error);
  try {
    read_pole_file("/nonexistent/poles.txt", 20, 10, 0.2);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
  CHECK_THROWS_AS(gen_prony(default_prony_spec(10, 11)), Error);
}

TEST_CASE("planted toy: norms and spectrum") {
  Rng rng(4);
  const Vector sigma{4.0, 2.0, 1.0};
  const Matrix c = planted_spectrum_toy(16, 8, sigma, rng);
  const double total = 21.0;
  for (std::size_t i = 0; i < 16; ++i) {
    double r = 0.0;
    for (const double x : c.row(i)) r += x * x;
    CHECK(r == doctest::Approx(total / 16.0).epsilon(1e-12));
  }
  for (std::size_t j = 0; j < 8; ++j) CHECK(dot(c.col(j), c.col(j)) == doctest::Approx(total / 8.0));
  const Vector s = singular_values(c);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s[i] == doctest::Approx(sigma[i]));
  CHECK(s[3] <= 1e-12);
  CHECK_THROWS_AS(planted_spectrum_toy(12, 8, sigma, rng), Error);
  CHECK_THROWS_AS(planted_spectrum_toy(8, 16, sigma, rng), Error);
}

TEST_CASE("rel_err_inf: examples") {
  const Vector x{1.0, -2.0, 3.0};
  CHECK(rel_err_inf(x, x) == 0.0);
  CHECK(rel_err_inf(Vector{2.0, -4.0, 6.0}, x) == doctest::Approx(1.0));
  CHECK(rel_err_inf(Vector{1.0, 2.0}, Vector{1.0, 4.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(rel_err_inf(Vector{1.0}, Vector{0.0}), Error);
}
