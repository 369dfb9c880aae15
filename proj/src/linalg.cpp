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

#include "qittls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "qittls/error.hpp"

namespace qittls {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kDirectJacobiMaxCols = 32;

void require_finite(const Matrix& m, const char* what) {
  const auto data = m.data();
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (!std::isfinite(data[k])) {
      fail(ErrorCode::kNonFinite,
           std::string(what) + ": non-finite entry at (" +
               std::to_string(k / m.cols()) + ", " + std::to_string(k % m.cols()) + ")");
    }
  }
}

// Column-major working copy for the Jacobi sweeps: each column contiguous.
struct ColumnStore {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double* col(std::size_t j) { return data.data() + j * rows; }
  const double* col(std::size_t j) const { return data.data() + j * rows; }
};

ColumnStore to_columns(const Matrix& m) {
  ColumnStore g{m.rows(), m.cols(), std::vector<double>(m.rows() * m.cols())};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) g.data[j * m.rows() + i] = m(i, j);
  }
  return g;
}

double column_norm2(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void rotate(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

// Jacobi on a matrix with rows >= cols. Fills sigma (unsorted) and, when
// requested, the right rotations V (column-major, cols x cols). On return g
// holds U * diag(sigma).
void jacobi_sweeps(ColumnStore& g, Vector& sigma, ColumnStore* v, int max_sweeps) {
  const std::size_t n = g.cols;
  const std::size_t m = g.rows;
  const double tol = kEps * static_cast<double>(m);
  Vector norms(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    norms[j] = column_norm2(g.col(j), m);
    total += norms[j];
  }
  // Columns below this squared norm are numerically zero and are not
  // rotated. Rotating roundoff against a real column never settles.
  const double zero_scale = kEps * static_cast<double>(std::max<std::size_t>(m, 16));
  const double negligible = total * zero_scale * zero_scale;

  bool converged = (n < 2) || total == 0.0;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (norms[p] <= negligible || norms[q] <= negligible) continue;
        const double* gp = g.col(p);
        const double* gq = g.col(q);
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += gp[i] * gp[i];
          beta += gq[i] * gq[i];
          gamma += gp[i] * gq[i];
        }
        norms[p] = alpha;
        norms[q] = beta;
        if (alpha <= negligible || beta <= negligible) continue;
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(g.col(p), g.col(q), m, c, s);
        if (v != nullptr) rotate(v->col(p), v->col(q), v->rows, c, s);
        norms[p] = alpha - t * gamma;
        norms[q] = beta + t * gamma;
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    fail(ErrorCode::kNoConvergence,
         "svd: Jacobi sweeps did not converge within " + std::to_string(max_sweeps) +
             " sweeps");
  }
  sigma.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double s2 = column_norm2(g.col(j), m);
    // Unrotated roundoff is not a singular direction; report it as zero.
    sigma[j] = s2 <= negligible ? 0.0 : std::sqrt(s2);
  }
}

// Fills column j of u (column-major) with a unit vector orthogonal to
// columns [0, j), preferring the direction of `seed` when it is usable.
void complete_column(ColumnStore& u, std::size_t j, const double* seed) {
  const std::size_t m = u.rows;
  std::vector<double> w(m);
  auto project_out = [&]() {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const double* uk = u.col(k);
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += uk[i] * w[i];
        for (std::size_t i = 0; i < m; ++i) w[i] -= proj * uk[i];
      }
    }
    return std::sqrt(column_norm2(w.data(), m));
  };
  if (seed != nullptr) {
    const double seed_norm = std::sqrt(column_norm2(seed, m));
    if (seed_norm > 0.0) {
      for (std::size_t i = 0; i < m; ++i) w[i] = seed[i] / seed_norm;
      const double r = project_out();
      if (r > 0.5) {
        for (std::size_t i = 0; i < m; ++i) u.col(j)[i] = w[i] / r;
        return;
      }
    }
  }
  // Some coordinate vector keeps at least sqrt((m - j) / m) of its norm.
  std::size_t best = m;
  double best_r = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    std::fill(w.begin(), w.end(), 0.0);
    w[e] = 1.0;
    const double r = project_out();
    if (r > best_r) {
      best_r = r;
      best = e;
    }
    if (r > 0.5) break;
  }
  if (best < m && best_r > 1e-3) {
    std::fill(w.begin(), w.end(), 0.0);
    w[best] = 1.0;
    const double r = project_out();
    for (std::size_t i = 0; i < m; ++i) u.col(j)[i] = w[i] / r;
    return;
  }
  fail(ErrorCode::kNoConvergence, "svd: could not complete orthonormal basis");
}

// Tall-or-square SVD (rows >= cols).
SvdFactors svd_tall(const Matrix& a, int max_sweeps) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ColumnStore g = to_columns(a);
  ColumnStore v{n, n, std::vector<double>(n * n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) v.col(j)[j] = 1.0;
  Vector sigma;
  jacobi_sweeps(g, sigma, &v, max_sweeps);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double smax = n > 0 ? sigma[order[0]] : 0.0;
  const double zero_cut = smax * kEps * static_cast<double>(std::max(m, n));

  ColumnStore u{m, n, std::vector<double>(m * n, 0.0)};
  SvdFactors out;
  out.sigma.resize(n);
  out.V = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.sigma[k] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) out.V(i, k) = v.col(src)[i];
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    if (out.sigma[k] > zero_cut && out.sigma[k] > 0.0) {
      const double inv = 1.0 / out.sigma[k];
      for (std::size_t i = 0; i < m; ++i) u.col(k)[i] = g.col(src)[i] * inv;
    } else {
      complete_column(u, k, g.col(src));
    }
  }
  out.U = Matrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) out.U(i, k) = u.col(k)[i];
  }
  return out;
}

// Householder QR, optionally with column pivoting, on a column-major copy.
// Reflector j is I - tau_j v_j v_j^T with v_j = (1, a[j+1:m, j]).
struct HouseholderQr {
  ColumnStore a;
  Vector tau;
  std::vector<std::size_t> perm;  // column j of A*P is column perm[j] of A
  std::size_t steps = 0;

  // Factors until min(m, n) steps or, when `stop_norm2` is positive, until
  // the trailing block's squared Frobenius norm drops to stop_norm2.
  void factor(bool pivot, double stop_norm2) {
    const std::size_t m = a.rows;
    const std::size_t n = a.cols;
    const std::size_t kmax = std::min(m, n);
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), 0);
    tau.assign(kmax, 0.0);
    Vector norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = column_norm2(a.col(j), m);
    steps = 0;
    for (std::size_t j = 0; j < kmax; ++j) {
      if (pivot) {
        // Exact trailing column norms each step; O(m n) per step is small
        // next to the reflector update and avoids downdating drift.
        double trailing = 0.0;
        for (std::size_t c = j; c < n; ++c) {
          norms[c] = column_norm2(a.col(c) + j, m - j);
          trailing += norms[c];
        }
        if (stop_norm2 > 0.0 && trailing <= stop_norm2) break;
        std::size_t best = j;
        for (std::size_t c = j + 1; c < n; ++c) {
          if (norms[c] > norms[best]) best = c;
        }
        if (best != j) {
          std::swap_ranges(a.col(j), a.col(j) + m, a.col(best));
          std::swap(norms[j], norms[best]);
          std::swap(perm[j], perm[best]);
        }
      }
      double* x = a.col(j) + j;
      const std::size_t len = m - j;
      const double alpha = x[0];
      const double tail = len > 1 ? column_norm2(x + 1, len - 1) : 0.0;
      if (tail == 0.0) {
        tau[j] = 0.0;
      } else {
        const double beta = -std::copysign(std::sqrt(alpha * alpha + tail), alpha);
        tau[j] = (beta - alpha) / beta;
        const double inv = 1.0 / (alpha - beta);
        for (std::size_t i = 1; i < len; ++i) x[i] *= inv;
        x[0] = beta;
        for (std::size_t c = j + 1; c < n; ++c) {
          double* y = a.col(c) + j;
          double w = y[0];
          for (std::size_t i = 1; i < len; ++i) w += x[i] * y[i];
          w *= tau[j];
          y[0] -= w;
          for (std::size_t i = 1; i < len; ++i) y[i] -= w * x[i];
        }
      }
      ++steps;
    }
  }

  // x (length m) <- H_0 H_1 ... H_{steps-1} x
  void apply_q(double* x) const {
    const std::size_t m = a.rows;
    for (std::size_t jj = steps; jj-- > 0;) {
      if (tau[jj] == 0.0) continue;
      const double* v = a.col(jj) + jj;
      double* y = x + jj;
      double w = y[0];
      for (std::size_t i = 1; i < m - jj; ++i) w += v[i] * y[i];
      w *= tau[jj];
      y[0] -= w;
      for (std::size_t i = 1; i < m - jj; ++i) y[i] -= w * v[i];
    }
  }
};

// `count` orthonormal columns orthogonal to the orthonormal columns of x.
ColumnStore orthogonal_complement(const ColumnStore& x, std::size_t count) {
  HouseholderQr qr{x, {}, {}, 0};
  qr.factor(false, 0.0);
  ColumnStore out{x.rows, count, std::vector<double>(x.rows * count, 0.0)};
  for (std::size_t k = 0; k < count; ++k) {
    double* col = out.col(k);
    col[x.cols + k] = 1.0;
    qr.apply_q(col);
  }
  return out;
}

// Tall-or-square SVD through a rank-revealing QR: A P = Q R, the trailing
// block of R is dropped once its Frobenius norm is negligible, and Jacobi
// runs on the transpose of the remaining k rows of R. Cost is O(m n k) plus
// Jacobi sweeps on an n x k matrix, where k is the numerical rank.
SvdFactors svd_tall_qr(const Matrix& a, int max_sweeps) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  HouseholderQr qr{to_columns(a), {}, {}, 0};
  const double cut = kEps * static_cast<double>(std::max(m, n));
  qr.factor(true, frob_norm2(a) * cut * cut);
  const std::size_t k = qr.steps;

  // Columns of R_k^T are the rows of R_k, indexed in pivoted coordinates.
  ColumnStore g{n, k, std::vector<double>(n * k, 0.0)};
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = r; c < n; ++c) g.col(r)[c] = qr.a.col(c)[r];
  }
  ColumnStore rot{k, k, std::vector<double>(k * k, 0.0)};
  for (std::size_t j = 0; j < k; ++j) rot.col(j)[j] = 1.0;
  Vector sigma;
  jacobi_sweeps(g, sigma, &rot, max_sweeps);

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });
  const double smax = k > 0 ? sigma[order[0]] : 0.0;
  const double zero_cut = smax * cut;
  std::size_t kept = 0;
  while (kept < k && sigma[order[kept]] > zero_cut) ++kept;

  SvdFactors out;
  out.sigma.assign(n, 0.0);
  for (std::size_t j = 0; j < k; ++j) out.sigma[j] = sigma[order[j]];

  ColumnStore v{n, n, std::vector<double>(n * n, 0.0)};
  for (std::size_t j = 0; j < kept; ++j) {
    const std::size_t src = order[j];
    const double inv = 1.0 / sigma[src];
    for (std::size_t c = 0; c < n; ++c) v.col(j)[qr.perm[c]] = g.col(src)[c] * inv;
  }
  if (kept < n) {
    const ColumnStore head{n, kept, std::vector<double>(v.data.begin(), v.data.begin() + n * kept)};
    const ColumnStore rest = orthogonal_complement(head, n - kept);
    std::copy(rest.data.begin(), rest.data.end(), v.data.begin() + n * kept);
  }

  // Left vectors: Q_k times the Jacobi rotations, then trailing columns of Q.
  ColumnStore u{m, n, std::vector<double>(m * n, 0.0)};
  for (std::size_t j = 0; j < n; ++j) {
    double* col = u.col(j);
    if (j < k) {
      const double* r = rot.col(order[j]);
      std::copy(r, r + k, col);
    } else {
      col[j] = 1.0;
    }
    qr.apply_q(col);
  }

  out.V = Matrix(n, n);
  out.U = Matrix(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) out.V(i, j) = v.col(j)[i];
    for (std::size_t i = 0; i < m; ++i) out.U(i, j) = u.col(j)[i];
  }
  return out;
}

void apply_sign_convention(SvdFactors& f) {
  for (std::size_t k = 0; k < f.V.cols(); ++k) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < f.V.rows(); ++i) {
      const double a = std::abs(f.V(i, k));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (f.V(best, k) < 0.0) {
      for (std::size_t i = 0; i < f.V.rows(); ++i) f.V(i, k) = -f.V(i, k);
      for (std::size_t i = 0; i < f.U.rows(); ++i) f.U(i, k) = -f.U(i, k);
    }
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    fail(ErrorCode::kInvalidArgument, "Matrix: data length does not match shape");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::kInvalidArgument, "Matrix: ragged rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Vector Matrix::col(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                     std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    fail(ErrorCode::kIndexOutOfRange, "Matrix::block: block exceeds matrix bounds");
  }
  Matrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t j = 0; j < ncols; ++j) out(i, j) = (*this)(row0 + i, col0 + j);
  }
  return out;
}

SvdFactors svd(const Matrix& m, const SvdOptions& options) {
  require_finite(m, "svd");
  SvdFactors out;
  const auto tall = [&](const Matrix& a) {
    const bool use_qr = options.method == SvdMethod::kQrJacobi ||
                        (options.method == SvdMethod::kAuto && a.cols() > kDirectJacobiMaxCols);
    return use_qr ? svd_tall_qr(a, options.max_sweeps) : svd_tall(a, options.max_sweeps);
  };
  if (m.rows() >= m.cols()) {
    out = tall(m);
  } else {
    SvdFactors t = tall(transpose(m));
    out.U = std::move(t.V);
    out.V = std::move(t.U);
    out.sigma = std::move(t.sigma);
  }
  apply_sign_convention(out);
  return out;
}

Vector singular_values(const Matrix& m) {
  require_finite(m, "singular_values");
  if (std::min(m.rows(), m.cols()) > kDirectJacobiMaxCols) return svd(m).sigma;
  ColumnStore g = to_columns(m.rows() >= m.cols() ? m : transpose(m));
  Vector sigma;
  jacobi_sweeps(g, sigma, nullptr, SvdOptions{}.max_sweeps);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

double default_pinv_tolerance(const Matrix& m) {
  return static_cast<double>(std::max(m.rows(), m.cols())) * kEps;
}

Matrix pinv(const Matrix& m, std::optional<double> rel_tol) {
  const double tol = rel_tol.value_or(default_pinv_tolerance(m));
  if (!(tol > 0.0 && tol < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "pinv: rel_tol must lie in (0, 1)");
  }
  Matrix out(m.cols(), m.rows());
  if (m.empty()) return out;
  const SvdFactors f = svd(m);
  const double cut = tol * f.sigma.front();
  for (std::size_t k = 0; k < f.sigma.size(); ++k) {
    if (!(f.sigma[k] > cut) || f.sigma[k] == 0.0) break;
    const double inv = 1.0 / f.sigma[k];
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const double vik = f.V(i, k) * inv;
      for (std::size_t j = 0; j < m.rows(); ++j) out(i, j) += vik * f.U(j, k);
    }
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  }
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::kInvalidArgument, "matmul: shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto orow = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) fail(ErrorCode::kInvalidArgument, "matmul_tn: shape mismatch");
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto arow = a.row(k);
    const auto brow = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      auto orow = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aki * brow[j];
    }
  }
  return out;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) fail(ErrorCode::kInvalidArgument, "matvec: shape mismatch");
  Vector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kInvalidArgument, "add: shape mismatch");
  }
  Matrix out = a;
  auto o = out.data();
  const auto bd = b.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] += bd[k];
  return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::kInvalidArgument, "subtract: shape mismatch");
  }
  Matrix out = a;
  auto o = out.data();
  const auto bd = b.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] -= bd[k];
  return out;
}

Matrix scale(const Matrix& a, double factor) {
  Matrix out = a;
  for (double& x : out.data()) x *= factor;
  return out;
}

Matrix augment(const Matrix& a, std::span<const double> b) {
  if (a.rows() != b.size()) fail(ErrorCode::kInvalidArgument, "augment: length mismatch");
  Matrix out(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
    out(i, a.cols()) = b[i];
  }
  return out;
}

double frob_norm2(const Matrix& m) {
  double s = 0.0;
  for (double x : m.data()) s += x * x;
  return s;
}

double frob_norm(const Matrix& m) { return std::sqrt(frob_norm2(m)); }

double spectral_norm(const Matrix& m) {
  if (m.empty()) return 0.0;
  return singular_values(m).front();
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::kInvalidArgument, "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double inf_norm_vec(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

Matrix orthonormalize_columns(const Matrix& m, double drop_tol) {
  ColumnStore g = to_columns(m);
  double largest = 0.0;
  for (std::size_t j = 0; j < g.cols; ++j) {
    largest = std::max(largest, std::sqrt(column_norm2(g.col(j), g.rows)));
  }
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < g.cols; ++j) {
    double* w = g.col(j);
    const double before = std::sqrt(column_norm2(w, g.rows));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k : kept) {
        const double* q = g.col(k);
        double proj = 0.0;
        for (std::size_t i = 0; i < g.rows; ++i) proj += q[i] * w[i];
        for (std::size_t i = 0; i < g.rows; ++i) w[i] -= proj * q[i];
      }
    }
    const double r = std::sqrt(column_norm2(w, g.rows));
    if (r <= drop_tol * largest || r <= drop_tol * before || r == 0.0) continue;
    for (std::size_t i = 0; i < g.rows; ++i) w[i] /= r;
    kept.push_back(j);
  }
  Matrix out(m.rows(), kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const double* q = g.col(kept[k]);
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, k) = q[i];
  }
  return out;
}

std::size_t numerical_rank(std::span<const double> sigma, double rel_tol) {
  if (sigma.empty()) return 0;
  const double smax = *std::max_element(sigma.begin(), sigma.end());
  return static_cast<std::size_t>(std::count_if(
      sigma.begin(), sigma.end(), [&](double s) { return s > rel_tol * smax && s > 0.0; }));
}

}  // namespace qittls
