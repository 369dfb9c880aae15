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


#include "qittls/sample_model.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "qittls/error.hpp"

namespace qittls {

namespace {

void check_index(std::size_t i, std::size_t n, const char* what) {
  if (i >= n) {
    fail(ErrorCode::kIndexOutOfRange, std::string(what) + ": index " + std::to_string(i) +
                                          " out of range [0, " + std::to_string(n) + ")");
  }
}

void count(TouchCounter* touches, std::size_t n) {
  if (touches != nullptr) touches->nodes += n;
}

}  // namespace

WeightTree::WeightTree(std::span<const double> weights) : size_(weights.size()) {
  if (size_ == 0) fail(ErrorCode::kInvalidArgument, "weight tree: empty input");
  capacity_ = 1;
  depth_ = 0;
  while (capacity_ < size_) {
    capacity_ *= 2;
    ++depth_;
  }
  nodes_.assign(2 * capacity_, 0.0);
  for (std::size_t i = 0; i < size_; ++i) {
    const double w = weights[i];
    if (!std::isfinite(w)) {
      fail(ErrorCode::kNonFinite, "weight tree: non-finite weight at index " + std::to_string(i));
    }
    if (w < 0.0) {
      fail(ErrorCode::kInvalidArgument,
           "weight tree: negative weight at index " + std::to_string(i));
    }
    nodes_[capacity_ + i] = w;
  }
  rebuild();
}

double WeightTree::weight(std::size_t i) const {
  check_index(i, size_, "weight tree");
  return nodes_[capacity_ + i];
}

void WeightTree::set(std::size_t i, double w, TouchCounter* touches) {
  check_index(i, size_, "weight tree");
  if (!std::isfinite(w) || w < 0.0) {
    fail(ErrorCode::kInvalidArgument, "weight tree: weight must be finite and nonnegative");
  }
  std::size_t k = capacity_ + i;
  nodes_[k] = w;
  count(touches, 1);
  for (k /= 2; k >= 1; k /= 2) {
    nodes_[k] = nodes_[2 * k] + nodes_[2 * k + 1];
    count(touches, 2);  // the rewritten node and the sibling it reads
  }
}

std::size_t WeightTree::sample(Rng& rng, TouchCounter* touches) const {
  const double root = nodes_[1];
  if (!(root > 0.0)) fail(ErrorCode::kEmptySupport, "weight tree: zero total weight");
  double u = rng.uniform() * root;
  std::size_t k = 1;
  count(touches, 1);
  while (k < capacity_) {
    const double left = nodes_[2 * k];
    const double right = nodes_[2 * k + 1];
    count(touches, 2);
    if ((u < left && left > 0.0) || right == 0.0) {
      k = 2 * k;
    } else {
      u -= left;
      k = 2 * k + 1;
    }
  }
  return k - capacity_;
}

double WeightTree::path_probability(std::size_t i) const {
  check_index(i, size_, "weight tree");
  if (!(nodes_[1] > 0.0)) return 0.0;
  double prob = 1.0;
  for (std::size_t k = capacity_ + i; k > 1; k /= 2) {
    const double parent = nodes_[k / 2];
    if (parent == 0.0) return 0.0;
    prob *= nodes_[k] / parent;
  }
  return prob;
}

void WeightTree::rebuild() {
  for (std::size_t k = capacity_; k-- > 1;) nodes_[k] = nodes_[2 * k] + nodes_[2 * k + 1];
}

SampleVector::SampleVector(std::span<const double> values)
    : values_(values.begin(), values.end()) {
  if (values_.empty()) fail(ErrorCode::kInvalidArgument, "sample vector: empty input");
  std::vector<double> squares(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      fail(ErrorCode::kNonFinite, "sample vector: non-finite value at index " + std::to_string(i));
    }
    squares[i] = values_[i] * values_[i];
  }
  tree_ = WeightTree(squares);
}

double SampleVector::query(std::size_t i) const {
  check_index(i, values_.size(), "sample vector");
  return values_[i];
}

void SampleVector::update(std::size_t i, double value, TouchCounter* touches) {
  check_index(i, values_.size(), "sample vector");
  if (!std::isfinite(value)) fail(ErrorCode::kNonFinite, "sample vector: non-finite update");
  values_[i] = value;
  tree_.set(i, value * value, touches);
}

double SampleVector::reconstruct(std::size_t i) const {
  const double magnitude = std::sqrt(tree_.weight(i));
  return std::signbit(values_[i]) ? -magnitude : magnitude;
}

SampleMatrix::SampleMatrix(const Matrix& values) {
  const std::size_t m = values.rows();
  const std::size_t n = values.cols();
  if (m == 0 || n == 0) fail(ErrorCode::kInvalidArgument, "sample matrix: empty input");
  const auto data = values.data();
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (!std::isfinite(data[k])) {
      fail(ErrorCode::kNonFinite, "sample matrix: non-finite entry at (" +
                                      std::to_string(k / n) + ", " + std::to_string(k % n) + ")");
    }
  }
  rows_.reserve(m);
  std::vector<double> row_weights(m);
  for (std::size_t i = 0; i < m; ++i) {
    rows_.emplace_back(values.row(i));
    row_weights[i] = rows_.back().norm2();
  }
  cols_.reserve(n);
  std::vector<double> col_weights(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vector c = values.col(j);
    cols_.emplace_back(c);
    col_weights[j] = cols_.back().norm2();
  }
  row_norms_ = WeightTree(row_weights);
  col_norms_ = WeightTree(col_weights);
}

const SampleVector& SampleMatrix::row_vector(std::size_t i) const {
  check_index(i, rows_.size(), "sample matrix row");
  return rows_[i];
}

const SampleVector& SampleMatrix::col_vector(std::size_t j) const {
  check_index(j, cols_.size(), "sample matrix column");
  return cols_[j];
}

double SampleMatrix::query(std::size_t i, std::size_t j) const {
  return row_vector(i).query(j);
}

double SampleMatrix::query_col_side(std::size_t i, std::size_t j) const {
  return col_vector(j).query(i);
}

void SampleMatrix::update(std::size_t i, std::size_t j, double value, TouchCounter* touches) {
  check_index(i, rows_.size(), "sample matrix row");
  check_index(j, cols_.size(), "sample matrix column");
  rows_[i].update(j, value, touches);
  cols_[j].update(i, value, touches);
  row_norms_.set(i, rows_[i].norm2(), touches);
  col_norms_.set(j, cols_[j].norm2(), touches);
}

double SampleMatrix::row_norm2(std::size_t i) const { return row_vector(i).norm2(); }

double SampleMatrix::col_norm2(std::size_t j) const { return col_vector(j).norm2(); }

std::size_t SampleMatrix::sample_in_row(std::size_t i, Rng& rng) const {
  return row_vector(i).sample(rng);
}

std::size_t SampleMatrix::sample_in_col(std::size_t j, Rng& rng) const {
  return col_vector(j).sample(rng);
}

double SampleMatrix::row_probability(std::size_t i) const {
  const double total = frob2();
  return total > 0.0 ? row_norm2(i) / total : 0.0;
}

double SampleMatrix::col_probability(std::size_t j) const {
  const double total = frob2_col_side();
  return total > 0.0 ? col_norm2(j) / total : 0.0;
}

void SampleMatrix::rebuild() {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    rows_[i].rebuild();
    row_norms_.set(i, rows_[i].norm2());
  }
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    cols_[j].rebuild();
    col_norms_.set(j, cols_[j].norm2());
  }
  row_norms_.rebuild();
  col_norms_.rebuild();
}

Matrix SampleMatrix::to_dense() const {
  Matrix out(rows(), cols());
  for (std::size_t i = 0; i < rows(); ++i) {
    const auto r = rows_[i].values();
    std::copy(r.begin(), r.end(), out.row(i).begin());
  }
  return out;
}

namespace {

constexpr std::array<char, 4> kMagic = {'Q', 'S', 'M', 'X'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    bytes[b] = static_cast<char>((value >> (8 * b)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) fail(ErrorCode::kFormat, "matrix file: truncated input");
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) value |= static_cast<T>(bytes[b]) << (8 * b);
  return value;
}

}  // namespace

void write_matrix(std::ostream& out, const Matrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, m.rows());
  put_le<std::uint64_t>(out, m.cols());
  for (const double x : m.data()) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &x, sizeof bits);
    put_le<std::uint64_t>(out, bits);
  }
  if (!out) fail(ErrorCode::kIo, "matrix file: write failed");
}

Matrix read_matrix(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) fail(ErrorCode::kFormat, "matrix file: bad magic");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kVersion) {
    fail(ErrorCode::kFormat, "matrix file: unsupported version " + std::to_string(version));
  }
  const auto rows = get_le<std::uint64_t>(in);
  const auto cols = get_le<std::uint64_t>(in);
  if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) {
    fail(ErrorCode::kFormat, "matrix file: implausible dimensions");
  }
  std::vector<double> data(rows * cols);
  for (double& x : data) {
    const auto bits = get_le<std::uint64_t>(in);
    std::memcpy(&x, &bits, sizeof x);
  }
  return Matrix(rows, cols, std::move(data));
}

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  write_matrix(out, m);
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  return read_matrix(in);
}

}  // namespace qittls
