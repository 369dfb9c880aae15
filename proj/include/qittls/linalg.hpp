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

// Small dense kernels: row-major matrices, a one-sided Jacobi SVD, the
// Moore-Penrose pseudoinverse, and the norms and products used by the
// sketching pipeline and the solvers.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace qittls {

using Vector = std::vector<double>;

/// Row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vector col(std::size_t j) const;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// Copy of the nrows x ncols submatrix whose top-left entry is (row0, col0).
  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
               std::size_t ncols) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Thin SVD M = U diag(sigma) V^T with r = min(rows, cols) triplets.
struct SvdFactors {
  Matrix U;      // rows x r, orthonormal columns
  Vector sigma;  // nonincreasing, nonnegative
  Matrix V;      // cols x r, orthonormal columns
};

enum class SvdMethod {
  kAuto,      // direct Jacobi up to 32 columns, QR-preconditioned above
  kJacobi,    // one-sided Jacobi on the matrix itself
  kQrJacobi,  // Jacobi on the rows of a rank-revealing QR factor
};

struct SvdOptions {
  int max_sweeps = 80;
  SvdMethod method = SvdMethod::kAuto;
};

/// One-sided (Hestenes) Jacobi SVD. Wider problems are first reduced by a
/// column-pivoted Householder QR; the trailing block is dropped once its
/// Frobenius norm falls below max(rows, cols) * eps * ||M||_F, and those
/// directions get sigma = 0.
///
/// Sign convention: in each column of V the entry of largest magnitude
/// (lowest index on ties) is nonnegative. The sweep order is fixed, so equal
/// input bytes give equal output bytes. Throws Error(kNoConvergence) when the
/// sweep cap is reached and Error(kNonFinite) on non-finite input.
SvdFactors svd(const Matrix& m, const SvdOptions& options = {});

/// Singular values only (same algorithm, V not accumulated).
Vector singular_values(const Matrix& m);

/// Default pseudoinverse cutoff: max(rows, cols) * machine epsilon.
double default_pinv_tolerance(const Matrix& m);

/// M^+ via the SVD; singular values <= rel_tol * sigma_1 are treated as zero.
/// The zero matrix maps to the zero matrix of transposed shape.
Matrix pinv(const Matrix& m, std::optional<double> rel_tol = std::nullopt);

Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T * b without forming the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, std::span<const double> x);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double factor);

/// [A, b]: appends b as a trailing column.
Matrix augment(const Matrix& a, std::span<const double> b);

double frob_norm2(const Matrix& m);
double frob_norm(const Matrix& m);
/// Largest singular value; 0 for the zero matrix.
double spectral_norm(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double inf_norm_vec(std::span<const double> v);

/// Orthonormal basis for the column space of `m` (modified Gram-Schmidt
/// applied twice). Columns that fall below `drop_tol` relative to the largest
/// input column are dropped.
Matrix orthonormalize_columns(const Matrix& m, double drop_tol = 1e-12);

/// Number of singular values strictly above rel_tol * sigma_1.
std::size_t numerical_rank(std::span<const double> sigma, double rel_tol);

}  // namespace qittls
