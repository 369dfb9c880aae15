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

// Two-stage row/column sampling sketch of C and the approximate right
// singular matrix V_hat = S^T U_bar Sigma_bar^{-1} built from it.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qittls/linalg.hpp"
#include "qittls/random.hpp"
#include "qittls/sample_model.hpp"

namespace qittls {

struct QiSvdParams {
  double epsilon = 0.0;
  std::size_t k = 0;
  double delta = 0.0;
  /// C in alpha = xi / (C k^4). 100 by default; 16 is the other common choice.
  double alpha_constant = 100.0;
  double xi = 0.0;
  double alpha = 0.0;
  double theta = 0.0;
  /// ceil(1 / (theta^2 delta)); kept as a double because it overflows any
  /// integer type for realistic epsilon and k.
  double p_theory = 0.0;
  std::size_t p_used = 0;
  bool p_overridden = false;
  double feasibility_cap = 0.0;
  std::optional<std::string> warning;
};

inline constexpr double kDefaultFeasibilityCap = 1e6;

/// Throws Error(kInvalidArgument) for epsilon <= 0, k == 0 or delta outside
/// (0, 1). Without an override, p_used = p_theory when that fits under the
/// feasibility cap; otherwise p_used is left at the cap and a warning is set,
/// and qisvd() refuses to run.
QiSvdParams derive_params(double epsilon, std::size_t k, double delta,
                          std::optional<std::size_t> p_override = std::nullopt,
                          double alpha_constant = 100.0,
                          double feasibility_cap = kDefaultFeasibilityCap);

struct RowSample {
  std::vector<std::size_t> indices;
  std::vector<double> probabilities;  // P_{i_t}
  Matrix S;                           // p x (n+1)
};

struct ColSample {
  std::vector<std::size_t> indices;
  std::vector<double> probabilities;  // P'_{j_t}
  Matrix W;                           // p x p
};

/// p independent row draws from P_i = ||C_i||^2 / ||C||_F^2, with
/// S_t = C_{i_t} / sqrt(p P_{i_t}). Duplicates are kept.
RowSample sample_rows(const SampleMatrix& c, std::size_t p, Rng& rng);

/// Column draws through the row models: t uniform in [p], then j from the
/// distribution of row i_t. P'_j = ||S_:,j||^2 / ||S||_F^2 and
/// W_:,t = S_:,j_t / sqrt(p P'_{j_t}).
ColSample sample_cols(const SampleMatrix& c, const RowSample& rows, std::size_t p, Rng& rng);

/// Same rescaling with caller-chosen indices instead of random draws.
RowSample rows_from_indices(const SampleMatrix& c, const std::vector<std::size_t>& indices);
ColSample cols_from_indices(const RowSample& rows, const std::vector<std::size_t>& indices);

/// P'_j evaluated from the definition: the mean over t of M_{i_t,j}^2 / ||M_{i_t}||^2.
std::vector<double> column_distribution_by_definition(const SampleMatrix& c,
                                                      const RowSample& rows);

/// l = min(k, max{t : sigma_t^2 >= alpha * frob2_w}) with 1-based t.
/// Throws Error(kDegenerateSketch) when no t qualifies.
std::size_t truncation_rank(const Vector& sigma_all, std::size_t k, double alpha, double frob2_w);

struct OrthogonalityReport {
  double spectral_deviation = 0.0;  // ||V^T V - I||_2
  double frobenius_deviation = 0.0; // ||V^T V - I||_F
  double frob2 = 0.0;               // ||V||_F^2
  double spectral_norm = 0.0;       // ||V||_2
};

OrthogonalityReport vhat_orthogonality_report(const Matrix& v_hat);

struct ApproxRightSingular {
  Matrix V_hat;          // (n+1) x l
  Vector sigma_bar;      // retained, descending
  Vector sigma_bar_all;  // all singular values of W
  std::size_t l = 0;
  double frob2_c = 0.0;
  double frob2_s = 0.0;
  double frob2_w = 0.0;
  double xi = 0.0;
  OrthogonalityReport orthogonality;
  RowSample rows;
  ColSample cols;
};

/// V_hat = S^T U_bar_l Sigma_bar_l^{-1}. Throws Error(kSingularSketch) when a
/// retained singular value is zero.
ApproxRightSingular assemble_v_hat(const Matrix& s, const Matrix& u_bar, const Vector& sigma_bar,
                                   std::size_t l);

/// Full sketch: row sampling, column sampling, SVD of W, truncation rank and
/// assembly. A pure function of (c, params, rng state).
ApproxRightSingular qisvd(const SampleMatrix& c, const QiSvdParams& params, Rng& rng);

/// Same pipeline on prescribed index lists; used for exhaustive sketches.
ApproxRightSingular qisvd_with_indices(const SampleMatrix& c, const QiSvdParams& params,
                                       const std::vector<std::size_t>& row_indices,
                                       const std::vector<std::size_t>& col_indices);

/// Indices 0, 1, ..., count-1 repeated cyclically to length p. With equal
/// row norms and p a multiple of m, S^T S = C^T C; with equal column norms of
/// S and p a multiple of n+1, W W^T = S S^T.
std::vector<std::size_t> cyclic_indices(std::size_t count, std::size_t p);

}  // namespace qittls
