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

// Total least squares on C = [A, b]: the classical solution from the last
// right singular vector, truncated TLS from the leading d right singular
// vectors (exact, sketched, or from a randomized range finder), and
// evaluators for the subspace and solution error bounds.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qittls/linalg.hpp"
#include "qittls/qisvd.hpp"
#include "qittls/random.hpp"
#include "qittls/sample_model.hpp"

namespace qittls {

enum class Method { kTls, kTtls, kQiTtls, kRttls };

std::string_view to_string(Method method);
/// Accepts "TLS", "TTLS", "QiTTLS", "RTTLS" (case-insensitive).
Method parse_method(std::string_view name);

struct TtlsSolution {
  Vector x;
  Method method = Method::kTtls;
  std::size_t d = 0;
  /// Smallest singular value of V_11 (TTLS family); NaN for TLS.
  double tau_d = std::numeric_limits<double>::quiet_NaN();
  /// Last component of v_{n+1} (TLS only); NaN otherwise.
  double v22 = std::numeric_limits<double>::quiet_NaN();
  bool generic = true;
  /// Set when V_11 is numerically rank deficient at the pinv tolerance.
  bool rank_deficient = false;
  std::vector<std::string> warnings;
  /// Singular values of C from the factorization the solver used.
  Vector sigma;
  /// Truncation rank of the sketch (QiTTLS only).
  std::size_t l = 0;
};

struct TtlsOptions {
  /// Relative cutoff for pinv(V_11^T); default max(rows, cols) * eps.
  std::optional<double> pinv_rel_tol;
};

inline constexpr double kNongenericTolerance = 1e-12;

/// x = -v_12 / v_22 from the full right singular basis of C. When m < n+1,
/// C is padded with zero rows, which leaves its right singular vectors
/// unchanged. Throws Error(kGenericityViolated) unless sigma_n(A) >
/// sigma_{n+1}(C), and Error(kNongeneric) when |v_22| < 1e-12.
TtlsSolution tls_solve(const Matrix& a, std::span<const double> b);

/// x = pinv(V_11^T) v_21^T from the leading d columns of a right singular
/// basis v of C ((n+1) x r, r >= d). Records tau_d and a warning when V_11 is
/// rank deficient.
TtlsSolution ttls_from_basis(const Matrix& v, std::size_t d, Method method,
                             const TtlsOptions& options = {});

/// Truncated TLS from the exact SVD of C; 1 <= d <= n.
TtlsSolution ttls_solve(const Matrix& a, std::span<const double> b, std::size_t d,
                        const TtlsOptions& options = {});

/// Truncated TLS from the sketched basis V_hat. Throws
/// Error(kTruncationTooLarge) when d exceeds the sketch rank l and
/// Error(kRankDeficient) when V_hat_11 is rank deficient.
TtlsSolution qittls_from_sketch(const ApproxRightSingular& sketch, std::size_t d,
                                const TtlsOptions& options = {});
TtlsSolution qittls_solve(const SampleMatrix& c, const QiSvdParams& params, std::size_t d,
                          Rng& rng, const TtlsOptions& options = {});

inline constexpr std::size_t kDefaultRttlsSketch = 20;

/// Randomized comparator: Gaussian test matrix (n+1) x sketch_size, one
/// power iteration, orthonormalization, SVD of Q^T C, then the truncated
/// partition. Requires d <= sketch_size <= n+1.
TtlsSolution rttls_solve(const Matrix& a, std::span<const double> b, std::size_t d,
                         std::size_t sketch_size, Rng& rng, const TtlsOptions& options = {});

struct SubspaceBound {
  double epsilon_v = std::numeric_limits<double>::infinity();
  /// min over i in [1, q] of sigma_i^2 - sigma_{i+1}^2.
  double eta = 0.0;
  double frob_c = 0.0;
  /// eta >= 20 epsilon ||C||_F^2 (false on a zero gap).
  bool gap_ok = false;
};

/// epsilon_v = sqrt(40 k epsilon / eta) ||C||_F + xi. sigma holds the
/// singular values of C; entries past its end count as zero. A nonpositive
/// gap gives epsilon_v = infinity.
SubspaceBound subspace_error_bound(const Vector& sigma, double epsilon, std::size_t k, double xi,
                                   std::size_t q);

struct BoundReport {
  double epsilon_v = std::numeric_limits<double>::infinity();
  double gap_eta = 0.0;
  bool gap_ok = false;
  bool tau_ok = false;     // tau_d > epsilon_v
  bool b_ok = false;       // ||b|| > sigma_{d+1}
  bool x_ok = false;       // ||x_TTLS|| != 0
  bool hypothesis_ok = false;
  double rhs = std::numeric_limits<double>::infinity();
  double observed = std::numeric_limits<double>::quiet_NaN();
};

/// Right-hand side ((sqrt(2) eps_v + tau_d + 1) / (tau_d - eps_v)) *
/// (2 sigma_1 / (||b|| - sigma_{d+1})). When tau_d <= eps_v or ||b|| <=
/// sigma_{d+1} the bound is not applicable and rhs is infinite. gap_ok is
/// taken from `subspace` and folded into hypothesis_ok.
BoundReport solution_error_bound(const Vector& sigma, std::size_t d, const SubspaceBound& subspace,
                                 double tau_d, double b_norm, double x_ttls_norm);

/// Relative 2-norm distance ||x - x_ref|| / ||x_ref||.
double rel_err_2(std::span<const double> x, std::span<const double> x_ref);

}  // namespace qittls
