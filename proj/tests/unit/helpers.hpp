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

// Shared fixtures for the unit tests.

#include <algorithm>
#include <cmath>
#include <string>

#include "qittls/linalg.hpp"
#include "qittls/random.hpp"

namespace qittls::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& x : m.data()) x = rng.uniform(-1.0, 1.0);
  return m;
}

inline Vector random_vector(std::size_t n, Rng& rng) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double out = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    out = std::max(out, std::abs(a.data()[k] - b.data()[k]));
  }
  return out;
}

inline double rel_frob_diff(const Matrix& a, const Matrix& b) {
  return frob_norm(subtract(a, b)) / std::max(frob_norm(b), 1e-300);
}

inline Matrix reconstruct(const SvdFactors& f) {
  Matrix us = f.U;
  for (std::size_t i = 0; i < us.rows(); ++i) {
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= f.sigma[j];
  }
  return matmul(us, transpose(f.V));
}

inline double orthonormality_defect(const Matrix& q) {
  Matrix g = matmul_tn(q, q);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return frob_norm(g);
}

// Sine of the largest principal angle between the column spans of two
// matrices with orthonormal columns, as ||(I - a a^T) b||_2.
inline double subspace_sine(const Matrix& a, const Matrix& b) {
  return spectral_norm(subtract(b, matmul(a, matmul_tn(a, b))));
}

inline std::string fixture_path(const std::string& name) {
  return std::string(QITTLS_FIXTURE_DIR) + "/" + name;
}

}  // namespace qittls::testing
