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
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "qittls/error.hpp"
#include "qittls/sample_model.hpp"

using namespace qittls;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::kInvalidArgument;
}

void check_tree_sums(const WeightTree& t) {
  for (std::size_t k = 1; k < t.capacity(); ++k) {
    CHECK(t.node(k) == t.node(2 * k) + t.node(2 * k + 1));
  }
}

std::size_t log2_ceil(std::size_t n) {
  std::size_t d = 0;
  while ((std::size_t{1} << d) < n) ++d;
  return d;
}

}  // namespace

TEST_CASE("sample vector: single support") {
  const SampleVector v(Vector{0.0, 0.0, 3.0, 0.0});
  CHECK(v.norm2() == 9.0);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(v.sample(rng) == 2);
}

TEST_CASE("sample vector: (1, 2, 2) distribution") {
  const SampleVector v(Vector{1.0, 2.0, 2.0});
  CHECK(v.norm2() == 9.0);
  CHECK(v.path_probability(0) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(v.path_probability(1) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(v.path_probability(2) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("sample vector: uniform vector has uniform paths") {
  const SampleVector v(Vector{1.0, 1.0, 1.0, 1.0});
  for (std::size_t i = 0; i < 4; ++i) CHECK(v.path_probability(i) == 0.25);
}

TEST_CASE("sample vector: update examples") {
  SampleVector v(Vector{1.0, 2.0, 2.0});
  v.update(0, 0.0);
  CHECK(v.norm2() == 8.0);
  CHECK(v.path_probability(0) == 0.0);
  CHECK(v.path_probability(1) == doctest::Approx(0.5));
  CHECK(v.query(0) == 0.0);

  SampleVector same(Vector{1.0, 2.0, 2.0});
  const SampleVector before = same;
  same.update(1, 2.0);
  CHECK(same == before);

  SampleVector sole(Vector{0.0, 5.0});
  sole.update(1, 0.0);
  Rng rng(2);
  CHECK(code_of([&] { sole.sample(rng); }) == ErrorCode::kEmptySupport);
}

TEST_CASE("sample vector: queries, norms and errors") {
  const Vector values{0.5, -1.25, 0.0, 3.0, -0.0};
  const SampleVector v(values);
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(v.query(i) == values[i]);
  CHECK(v.query(2) == 0.0);
  CHECK(code_of([&] { v.query(5); }) == ErrorCode::kIndexOutOfRange);
  CHECK(SampleVector(Vector{0.0, 0.0}).norm2() == 0.0);
  CHECK(SampleVector(Vector{0.0, 1.0, 0.0}).norm2() == 1.0);
  CHECK(code_of([] { SampleVector(Vector{}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { SampleVector(Vector{1.0, INFINITY}); }) == ErrorCode::kNonFinite);
  try {
    SampleVector(Vector{1.0, 2.0, NAN});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("index 2") != std::string::npos);
  }
  SampleVector w(values);
  CHECK(code_of([&] { w.update(9, 1.0); }) == ErrorCode::kIndexOutOfRange);
}

TEST_CASE("sample vector: leaves reconstruct the entries") {
  Rng rng(3);
  const Vector values = testing::random_vector(37, rng);
  const SampleVector v(values);
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(std::abs(v.reconstruct(i) - values[i]) <= 4.0 * std::abs(values[i]) * 1.2e-16);
  }
}

TEST_CASE("sample vector: exact path probabilities") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(70);
    Vector values = testing::random_vector(n, rng);
    if (n > 3) values[rng.index(n)] = 0.0;
    const SampleVector v(values);
    double total = 0.0;
    for (const double x : values) total += x * x;
    for (std::size_t i = 0; i < n; ++i) {
      const double expected = values[i] * values[i] / total;
      CHECK(std::abs(v.path_probability(i) - expected) <= 1e-12 * std::max(expected, 1e-300));
    }
  }
}

TEST_CASE("sample vector: (1, 1) frequencies") {
  const SampleVector v(Vector{1.0, 1.0});
  Rng rng(5);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += v.sample(rng) == 1 ? 1 : 0;
  const double se = std::sqrt(0.25 / n);
  CHECK(std::abs(static_cast<double>(ones) / n - 0.5) <= 3.0 * se);
}

TEST_CASE("sample vector: zero-weight leaves are never drawn") {
  const SampleVector v(Vector{0.0, 1e-300, 0.0, 0.0, 1.0, 0.0, 0.0});
  Rng rng(6);
  for (int i = 0; i < 20000; ++i) {
    const std::size_t j = v.sample(rng);
    CHECK((j == 1 || j == 4));
  }
}

TEST_CASE("sample vector: touch counts are logarithmic") {
  Rng rng(7);
  for (const std::size_t n : {1u, 2u, 3u, 17u, 64u, 1000u, 4097u}) {
    SampleVector v(testing::random_vector(n, rng));
    const std::size_t bound = 2 * (log2_ceil(n) + 1);
    for (int rep = 0; rep < 20; ++rep) {
      TouchCounter up;
      v.update(rng.index(n), rng.uniform(-1.0, 1.0), &up);
      CHECK(up.nodes <= bound);
      TouchCounter draw;
      v.sample(rng, &draw);
      CHECK(draw.nodes <= bound);
    }
  }
}

TEST_CASE("sample vector: updates match a fresh build") {
  Rng rng(8);
  const std::size_t n = 50;
  SampleVector v(testing::random_vector(n, rng));
  Vector final_values(v.values().begin(), v.values().end());
  for (int step = 0; step < 5000; ++step) {
    const std::size_t i = rng.index(n);
    const double x = rng.uniform(-3.0, 3.0);
    v.update(i, x);
    final_values[i] = x;
  }
  const SampleVector fresh(final_values);
  for (std::size_t k = 1; k < 2 * v.tree().capacity(); ++k) {
    CHECK(std::abs(v.tree().node(k) - fresh.tree().node(k)) <=
          1e-9 * std::max(fresh.tree().node(k), 1e-300));
  }
  check_tree_sums(v.tree());
}

TEST_CASE("sample vector: rebuild after a million updates") {
  Rng rng(9);
  const std::size_t n = 256;
  SampleVector v(testing::random_vector(n, rng));
  for (int step = 0; step < 1000000; ++step) v.update(rng.index(n), rng.uniform(-1.0, 1.0));
  v.rebuild();
  check_tree_sums(v.tree());
  double total = 0.0;
  for (const double x : v.values()) total += x * x;
  CHECK(std::abs(v.norm2() - total) <= 1e-12 * total);
}

TEST_CASE("sample matrix: identity and hand cases") {
  const SampleMatrix id(Matrix::identity(2));
  CHECK(id.frob2() == 2.0);
  CHECK(id.row_probability(0) == 0.5);
  CHECK(id.col_norm2(0) == 1.0);
  CHECK(id.col_norm2(1) == 1.0);

  const SampleMatrix m(Matrix{{1.0, 2.0}, {2.0, 4.0}});
  CHECK(m.frob2() == 25.0);
  CHECK(m.row_probability(0) == doctest::Approx(5.0 / 25.0));
  CHECK(m.row_probability(1) == doctest::Approx(20.0 / 25.0));

  const SampleMatrix r(Matrix{{3.0, 4.0}, {0.0, 7.0}});
  CHECK(r.row_vector(0).path_probability(0) == doctest::Approx(9.0 / 25.0));
  CHECK(r.row_vector(0).path_probability(1) == doctest::Approx(16.0 / 25.0));
  Rng rng(10);
  for (int i = 0; i < 200; ++i) CHECK(r.sample_in_row(1, rng) == 1);

  Matrix single(3, 4);
  single(2, 1) = -2.0;
  const SampleMatrix s(single);
  for (int i = 0; i < 200; ++i) {
    CHECK(s.sample_row(rng) == 2);
    CHECK(s.sample_col(rng) == 1);
    CHECK(s.sample_in_col(1, rng) == 2);
  }
  CHECK_THROWS_AS(s.sample_in_row(0, rng), Error);

  SampleMatrix upd(Matrix::identity(2));
  upd.update(1, 1, 0.0);
  CHECK(upd.frob2() == 1.0);
  CHECK(upd.frob2_col_side() == 1.0);
  CHECK_THROWS_AS(upd.update(2, 0, 1.0), Error);
  CHECK_THROWS_AS(upd.query(0, 2), Error);
}

TEST_CASE("sample matrix: zero rows are never sampled") {
  Matrix m(4, 3, 1.0);
  for (std::size_t j = 0; j < 3; ++j) m(2, j) = 0.0;
  const SampleMatrix s(m);
  Rng rng(11);
  for (int i = 0; i < 5000; ++i) CHECK(s.sample_row(rng) != 2);
  CHECK_THROWS_AS(SampleMatrix(Matrix(2, 2)).sample_row(rng), Error);
}

TEST_CASE("sample matrix: mirrors stay consistent under updates") {
  Rng rng(12);
  const std::size_t m = 13;
  const std::size_t n = 9;
  SampleMatrix s(testing::random_matrix(m, n, rng));
  for (int step = 0; step < 3000; ++step) {
    const std::size_t i = rng.index(m);
    const std::size_t j = rng.index(n);
    TouchCounter touches;
    s.update(i, j, rng.uniform(-2.0, 2.0), &touches);
    CHECK(touches.nodes <= 2 * (2 * (log2_ceil(m) + 1) + 2 * (log2_ceil(n) + 1)));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) CHECK(s.query(i, j) == s.query_col_side(i, j));
    CHECK(s.row_norm_tree().weight(i) == s.row_vector(i).norm2());
  }
  for (std::size_t j = 0; j < n; ++j) CHECK(s.col_norm_tree().weight(j) == s.col_vector(j).norm2());
  CHECK(std::abs(s.frob2() - s.frob2_col_side()) <= 1e-12 * s.frob2());
  const SampleMatrix fresh(s.to_dense());
  CHECK(std::abs(s.frob2() - fresh.frob2()) <= 1e-12 * fresh.frob2());
}

TEST_CASE("sample matrix: empirical row frequencies") {
  const Matrix m{{1.0, 0.0, 2.0}, {0.5, 0.5, 0.5}, {3.0, 1.0, 0.0}, {0.0, 0.2, 0.1}};
  const SampleMatrix s(m);
  Rng rng(13);
  const int n = 100000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < n; ++i) ++counts[s.sample_row(rng)];
  for (std::size_t i = 0; i < 4; ++i) {
    const double p = s.row_probability(i);
    CHECK(std::abs(counts[i] / static_cast<double>(n) - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("matrix file: round trip and layout") {
  Rng rng(14);
  const Matrix m = testing::random_matrix(5, 3, rng);
  std::stringstream buf;
  write_matrix(buf, m);
  const std::string bytes = buf.str();
  REQUIRE(bytes.size() == 4 + 4 + 8 + 8 + 15 * 8);
  CHECK(bytes.substr(0, 4) == "QSMX");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 5);
  CHECK(bytes[16] == 3);
  CHECK(read_matrix(buf) == m);

  std::stringstream bad("QSMY");
  CHECK(code_of([&] { read_matrix(bad); }) == ErrorCode::kFormat);
  std::stringstream truncated(bytes.substr(0, 40));
  CHECK(code_of([&] { read_matrix(truncated); }) == ErrorCode::kFormat);
  CHECK(code_of([] { load_matrix("/nonexistent/qittls.qsmx"); }) == ErrorCode::kIo);
}
