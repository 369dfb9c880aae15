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


#include "qittls/qisvd.hpp"

#include <cmath>
#include <limits>

#include "qittls/error.hpp"

namespace qittls {

QiSvdParams derive_params(double epsilon, std::size_t k, double delta,
                          std::optional<std::size_t> p_override, double alpha_constant,
                          double feasibility_cap) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    fail(ErrorCode::kInvalidArgument, "epsilon must be positive and finite");
  }
  if (k == 0) fail(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::kInvalidArgument, "delta must lie in (0, 1)");
  if (!(alpha_constant > 0.0)) fail(ErrorCode::kInvalidArgument, "alpha constant must be positive");
  if (p_override && *p_override == 0) fail(ErrorCode::kInvalidArgument, "p must be at least 1");

  QiSvdParams out;
  out.epsilon = epsilon;
  out.k = k;
  out.delta = delta;
  out.alpha_constant = alpha_constant;
  out.feasibility_cap = feasibility_cap;
  out.xi = epsilon / (2.0 * epsilon + 4.0);
  const double k4 = std::pow(static_cast<double>(k), 4);
  out.alpha = out.xi / (alpha_constant * k4);
  out.theta = out.alpha * out.xi;
  out.p_theory = std::ceil(1.0 / (out.theta * out.theta * delta));
  if (p_override) {
    out.p_used = *p_override;
    out.p_overridden = true;
  } else if (out.p_theory <= feasibility_cap) {
    out.p_used = static_cast<std::size_t>(out.p_theory);
  } else {
    out.p_used = static_cast<std::size_t>(feasibility_cap);
  }
  if (out.p_theory > feasibility_cap) {
    out.warning = "theoretical sketch size " + std::to_string(out.p_theory) +
                  " exceeds the feasibility cap " + std::to_string(feasibility_cap);
  }
  return out;
}

RowSample rows_from_indices(const SampleMatrix& c, const std::vector<std::size_t>& indices) {
  const double total = c.frob2();
  if (!(total > 0.0)) fail(ErrorCode::kEmptySupport, "row sampling: zero matrix");
  const std::size_t p = indices.size();
  if (p == 0) fail(ErrorCode::kInvalidArgument, "row sampling: p must be at least 1");
  RowSample out;
  out.indices = indices;
  out.probabilities.resize(p);
  out.S = Matrix(p, c.cols());
  for (std::size_t t = 0; t < p; ++t) {
    const std::size_t i = indices[t];
    const double prob = c.row_norm2(i) / total;
    if (!(prob > 0.0)) fail(ErrorCode::kEmptySupport, "row sampling: zero-probability row");
    out.probabilities[t] = prob;
    const double scale = 1.0 / std::sqrt(static_cast<double>(p) * prob);
    const auto src = c.row(i);
    auto dst = out.S.row(t);
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] = src[j] * scale;
  }
  return out;
}

RowSample sample_rows(const SampleMatrix& c, std::size_t p, Rng& rng) {
  if (!(c.frob2() > 0.0)) fail(ErrorCode::kEmptySupport, "row sampling: zero matrix");
  std::vector<std::size_t> indices(p);
  for (auto& i : indices) i = c.sample_row(rng);
  return rows_from_indices(c, indices);
}

ColSample cols_from_indices(const RowSample& rows, const std::vector<std::size_t>& indices) {
  const Matrix& s = rows.S;
  const double total = frob_norm2(s);
  if (!(total > 0.0)) fail(ErrorCode::kEmptySupport, "column sampling: zero sketch");
  const std::size_t p = indices.size();
  if (p == 0) fail(ErrorCode::kInvalidArgument, "column sampling: p must be at least 1");
  ColSample out;
  out.indices = indices;
  out.probabilities.resize(p);
  out.W = Matrix(s.rows(), p);
  for (std::size_t t = 0; t < p; ++t) {
    const std::size_t j = indices[t];
    if (j >= s.cols()) fail(ErrorCode::kIndexOutOfRange, "column sampling: index out of range");
    double col2 = 0.0;
    for (std::size_t r = 0; r < s.rows(); ++r) col2 += s(r, j) * s(r, j);
    const double prob = col2 / total;
    if (!(prob > 0.0)) fail(ErrorCode::kEmptySupport, "column sampling: zero-probability column");
    out.probabilities[t] = prob;
    const double scale = 1.0 / std::sqrt(static_cast<double>(p) * prob);
    for (std::size_t r = 0; r < s.rows(); ++r) out.W(r, t) = s(r, j) * scale;
  }
  return out;
}

ColSample sample_cols(const SampleMatrix& c, const RowSample& rows, std::size_t p, Rng& rng) {
  if (!(frob_norm2(rows.S) > 0.0)) fail(ErrorCode::kEmptySupport, "column sampling: zero sketch");
  const std::size_t prows = rows.indices.size();
  std::vector<std::size_t> indices(p);
  for (auto& j : indices) {
    const std::size_t t = static_cast<std::size_t>(rng.index(prows));
    j = c.sample_in_row(rows.indices[t], rng);
  }
  return cols_from_indices(rows, indices);
}

std::vector<double> column_distribution_by_definition(const SampleMatrix& c,
                                                      const RowSample& rows) {
  std::vector<double> out(c.cols(), 0.0);
  const double p = static_cast<double>(rows.indices.size());
  for (const std::size_t i : rows.indices) {
    const auto r = c.row(i);
    const double n2 = c.row_norm2(i);
    for (std::size_t j = 0; j < r.size(); ++j) out[j] += r[j] * r[j] / n2 / p;
  }
  return out;
}

std::size_t truncation_rank(const Vector& sigma_all, std::size_t k, double alpha,
                            double frob2_w) {
  const double threshold = alpha * frob2_w;
  std::size_t last = 0;
  for (std::size_t t = 0; t < sigma_all.size(); ++t) {
    if (sigma_all[t] * sigma_all[t] >= threshold) last = t + 1;
  }
  if (last == 0) {
    fail(ErrorCode::kDegenerateSketch,
         "no sketch singular value reaches the threshold alpha * ||W||_F^2");
  }
  return std::min(k, last);
}

OrthogonalityReport vhat_orthogonality_report(const Matrix& v_hat) {
  OrthogonalityReport out;
  Matrix gram = matmul_tn(v_hat, v_hat);
  out.frob2 = frob_norm2(v_hat);
  out.spectral_norm = spectral_norm(v_hat);
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
  out.frobenius_deviation = frob_norm(gram);
  out.spectral_deviation = spectral_norm(gram);
  return out;
}

ApproxRightSingular assemble_v_hat(const Matrix& s, const Matrix& u_bar, const Vector& sigma_bar,
                                   std::size_t l) {
  if (l == 0 || l > sigma_bar.size() || l > u_bar.cols()) {
    fail(ErrorCode::kInvalidArgument, "assemble: truncation rank out of range");
  }
  if (u_bar.rows() != s.rows()) fail(ErrorCode::kInvalidArgument, "assemble: shape mismatch");
  for (std::size_t t = 0; t < l; ++t) {
    if (!(sigma_bar[t] > 0.0)) {
      fail(ErrorCode::kSingularSketch, "assemble: retained singular value " +
                                           std::to_string(t + 1) + " is zero");
    }
  }
  ApproxRightSingular out;
  out.l = l;
  out.sigma_bar.assign(sigma_bar.begin(), sigma_bar.begin() + static_cast<std::ptrdiff_t>(l));
  Matrix scaled = u_bar.block(0, 0, u_bar.rows(), l);
  for (std::size_t r = 0; r < scaled.rows(); ++r) {
    for (std::size_t t = 0; t < l; ++t) scaled(r, t) /= sigma_bar[t];
  }
  out.V_hat = matmul_tn(s, scaled);
  out.orthogonality = vhat_orthogonality_report(out.V_hat);
  return out;
}

namespace {

ApproxRightSingular finish(const SampleMatrix& c, const QiSvdParams& params, RowSample rows,
                           ColSample cols) {
  const SvdFactors w = svd(cols.W);
  const double frob2_w = frob_norm2(cols.W);
  const std::size_t l = truncation_rank(w.sigma, params.k, params.alpha, frob2_w);
  ApproxRightSingular out = assemble_v_hat(rows.S, w.U, w.sigma, l);
  out.sigma_bar_all = w.sigma;
  out.frob2_c = c.frob2();
  out.frob2_s = frob_norm2(rows.S);
  out.frob2_w = frob2_w;
  out.xi = params.xi;
  out.rows = std::move(rows);
  out.cols = std::move(cols);
  return out;
}

}  // namespace

ApproxRightSingular qisvd(const SampleMatrix& c, const QiSvdParams& params, Rng& rng) {
  if (!params.p_overridden && params.p_theory > params.feasibility_cap) {
    fail(ErrorCode::kInvalidArgument,
         "qisvd: " + params.warning.value_or("sketch size infeasible") + "; set p explicitly");
  }
  const std::size_t p = params.p_used;
  if (p == 0) fail(ErrorCode::kInvalidArgument, "qisvd: p must be at least 1");
  RowSample rows = sample_rows(c, p, rng);
  ColSample cols = sample_cols(c, rows, p, rng);
  return finish(c, params, std::move(rows), std::move(cols));
}

ApproxRightSingular qisvd_with_indices(const SampleMatrix& c, const QiSvdParams& params,
                                       const std::vector<std::size_t>& row_indices,
                                       const std::vector<std::size_t>& col_indices) {
  RowSample rows = rows_from_indices(c, row_indices);
  ColSample cols = cols_from_indices(rows, col_indices);
  return finish(c, params, std::move(rows), std::move(cols));
}

std::vector<std::size_t> cyclic_indices(std::size_t count, std::size_t p) {
  if (count == 0) fail(ErrorCode::kInvalidArgument, "cyclic indices: count must be positive");
  std::vector<std::size_t> out(p);
  for (std::size_t t = 0; t < p; ++t) out[t] = t % count;
  return out;
}

}  // namespace qittls
