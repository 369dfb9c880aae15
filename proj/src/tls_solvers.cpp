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


#include "qittls/tls_solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "qittls/error.hpp"

namespace qittls {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kTls: return "TLS";
    case Method::kTtls: return "TTLS";
    case Method::kQiTtls: return "QiTTLS";
    case Method::kRttls: return "RTTLS";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "tls") return Method::kTls;
  if (lower == "ttls") return Method::kTtls;
  if (lower == "qittls") return Method::kQiTtls;
  if (lower == "rttls") return Method::kRttls;
  fail(ErrorCode::kInvalidArgument, "unknown method '" + std::string(name) + "'");
}

namespace {

void check_shapes(const Matrix& a, std::span<const double> b) {
  if (a.rows() == 0 || a.cols() == 0) fail(ErrorCode::kInvalidArgument, "empty coefficient matrix");
  if (b.size() != a.rows()) {
    fail(ErrorCode::kInvalidArgument, "right-hand side length " + std::to_string(b.size()) +
                                          " does not match " + std::to_string(a.rows()) + " rows");
  }
}

// C = [A, b], padded with zero rows up to n+1 rows so that the SVD returns
// the complete right singular basis.
Matrix augmented_square(const Matrix& a, std::span<const double> b) {
  const Matrix c = augment(a, b);
  if (c.rows() >= c.cols()) return c;
  Matrix padded(c.cols(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    std::copy(c.row(i).begin(), c.row(i).end(), padded.row(i).begin());
  }
  return padded;
}

std::string format_double(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

TtlsSolution tls_solve(const Matrix& a, std::span<const double> b) {
  check_shapes(a, b);
  const std::size_t n = a.cols();
  if (a.rows() < n) fail(ErrorCode::kInvalidArgument, "TLS needs at least as many rows as columns");
  const SvdFactors f = svd(augmented_square(a, b));
  const Vector sigma_a = singular_values(a);
  const double sigma_n_a = sigma_a[n - 1];
  const double sigma_last = f.sigma[n];
  if (!(sigma_n_a > sigma_last)) {
    fail(ErrorCode::kGenericityViolated,
         "TLS genericity violated: sigma_n(A) = " + format_double(sigma_n_a) +
             " <= sigma_{n+1}(C) = " + format_double(sigma_last));
  }
  TtlsSolution out;
  out.method = Method::kTls;
  out.d = n;
  out.sigma = f.sigma;
  out.v22 = f.V(n, n);
  if (std::abs(out.v22) < kNongenericTolerance) {
    out.generic = false;
    fail(ErrorCode::kNongeneric, "TLS problem is nongeneric: |v22| = " + format_double(out.v22));
  }
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = -f.V(i, n) / out.v22;
  return out;
}

TtlsSolution ttls_from_basis(const Matrix& v, std::size_t d, Method method,
                             const TtlsOptions& options) {
  if (v.rows() < 2) fail(ErrorCode::kInvalidArgument, "basis needs at least two rows");
  const std::size_t n = v.rows() - 1;
  if (d == 0 || d > n) {
    fail(ErrorCode::kInvalidArgument, "truncation d = " + std::to_string(d) +
                                          " must lie in [1, " + std::to_string(n) + "]");
  }
  if (d > v.cols()) {
    fail(ErrorCode::kTruncationTooLarge, "truncation d = " + std::to_string(d) +
                                             " exceeds the basis rank " +
                                             std::to_string(v.cols()));
  }
  const Matrix v11 = v.block(0, 0, n, d);
  Vector v21(d);
  for (std::size_t j = 0; j < d; ++j) v21[j] = v(n, j);
  const Matrix v11t = transpose(v11);
  const double tol = options.pinv_rel_tol.value_or(default_pinv_tolerance(v11t));

  TtlsSolution out;
  out.method = method;
  out.d = d;
  const Vector tau = singular_values(v11);
  out.tau_d = tau[d - 1];
  if (!(out.tau_d > tol * tau[0])) {
    out.rank_deficient = true;
    out.warnings.push_back("V11 is numerically rank deficient: tau_d = " +
                           format_double(out.tau_d));
  }
  out.x = matvec(pinv(v11t, tol), v21);
  for (const double xi : out.x) {
    if (!std::isfinite(xi)) fail(ErrorCode::kNonFinite, "truncated TLS produced a non-finite value");
  }
  return out;
}

TtlsSolution ttls_solve(const Matrix& a, std::span<const double> b, std::size_t d,
                        const TtlsOptions& options) {
  check_shapes(a, b);
  const SvdFactors f = svd(augmented_square(a, b));
  TtlsSolution out = ttls_from_basis(f.V, d, Method::kTtls, options);
  out.sigma = f.sigma;
  return out;
}

TtlsSolution qittls_from_sketch(const ApproxRightSingular& sketch, std::size_t d,
                                const TtlsOptions& options) {
  if (d > sketch.l) {
    fail(ErrorCode::kTruncationTooLarge, "truncation d = " + std::to_string(d) +
                                             " exceeds the sketch rank l = " +
                                             std::to_string(sketch.l));
  }
  TtlsSolution out = ttls_from_basis(sketch.V_hat, d, Method::kQiTtls, options);
  if (out.rank_deficient) {
    fail(ErrorCode::kRankDeficient,
         "sketched V11 is rank deficient: tau_d = " + format_double(out.tau_d));
  }
  out.sigma = sketch.sigma_bar;
  out.l = sketch.l;
  return out;
}

TtlsSolution qittls_solve(const SampleMatrix& c, const QiSvdParams& params, std::size_t d,
                          Rng& rng, const TtlsOptions& options) {
  return qittls_from_sketch(qisvd(c, params, rng), d, options);
}

TtlsSolution rttls_solve(const Matrix& a, std::span<const double> b, std::size_t d,
                         std::size_t sketch_size, Rng& rng, const TtlsOptions& options) {
  check_shapes(a, b);
  const Matrix c = augment(a, b);
  const std::size_t n1 = c.cols();
  if (d == 0 || d > sketch_size || sketch_size > n1) {
    fail(ErrorCode::kInvalidArgument, "RTTLS needs d <= sketch size <= n+1");
  }
  Matrix omega(n1, sketch_size);
  for (double& w : omega.data()) w = rng.normal();
  Matrix y = matmul(c, omega);
  y = matmul(c, matmul_tn(c, y));
  const Matrix q = orthonormalize_columns(y);
  if (q.cols() < d) {
    fail(ErrorCode::kRankDeficient, "RTTLS range basis has rank " + std::to_string(q.cols()) +
                                        " < d = " + std::to_string(d));
  }
  const SvdFactors f = svd(matmul_tn(q, c));
  TtlsSolution out = ttls_from_basis(f.V, d, Method::kRttls, options);
  out.sigma = f.sigma;
  return out;
}

SubspaceBound subspace_error_bound(const Vector& sigma, double epsilon, std::size_t k, double xi,
                                   std::size_t q) {
  if (q == 0) fail(ErrorCode::kInvalidArgument, "gap index q must be at least 1");
  const auto at = [&](std::size_t i) { return i < sigma.size() ? sigma[i] : 0.0; };
  SubspaceBound out;
  double frob2 = 0.0;
  for (const double s : sigma) frob2 += s * s;
  out.frob_c = std::sqrt(frob2);
  out.eta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q; ++i) {
    out.eta = std::min(out.eta, at(i) * at(i) - at(i + 1) * at(i + 1));
  }
  if (!(out.eta > 0.0)) {
    out.gap_ok = false;
    out.epsilon_v = std::numeric_limits<double>::infinity();
    return out;
  }
  out.gap_ok = out.eta >= 20.0 * epsilon * frob2;
  out.epsilon_v = std::sqrt(40.0 * static_cast<double>(k) * epsilon / out.eta) * out.frob_c + xi;
  return out;
}

BoundReport solution_error_bound(const Vector& sigma, std::size_t d, const SubspaceBound& subspace,
                                 double tau_d, double b_norm, double x_ttls_norm) {
  if (sigma.empty() || d == 0) fail(ErrorCode::kInvalidArgument, "bound needs sigma and d >= 1");
  BoundReport out;
  out.epsilon_v = subspace.epsilon_v;
  out.gap_eta = subspace.eta;
  out.gap_ok = subspace.gap_ok;
  const double sigma1 = sigma[0];
  const double sigma_next = d < sigma.size() ? sigma[d] : 0.0;
  out.tau_ok = tau_d > out.epsilon_v;
  out.b_ok = b_norm > sigma_next;
  out.x_ok = x_ttls_norm != 0.0;
  out.hypothesis_ok = out.gap_ok && out.tau_ok && out.b_ok && out.x_ok;
  if (out.tau_ok && out.b_ok) {
    const double ev = out.epsilon_v;
    out.rhs = ((std::sqrt(2.0) * ev + tau_d + 1.0) / (tau_d - ev)) *
              (2.0 * sigma1 / (b_norm - sigma_next));
  }
  return out;
}

double rel_err_2(std::span<const double> x, std::span<const double> x_ref) {
  if (x.size() != x_ref.size()) fail(ErrorCode::kInvalidArgument, "length mismatch");
  const double ref = norm2(x_ref);
  if (!(ref > 0.0)) fail(ErrorCode::kInvalidArgument, "zero reference vector");
  double diff2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) diff2 += (x[i] - x_ref[i]) * (x[i] - x_ref[i]);
  return std::sqrt(diff2) / ref;
}

}  // namespace qittls
