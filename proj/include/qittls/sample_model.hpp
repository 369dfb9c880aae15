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

// l2-norm sample model: binary sum trees that support O(log n) entry updates
// and O(log n) sampling of index i with probability v_i^2 / ||v||^2, plus the
// matrix structure that keeps one tree per row, one per column and a tree
// over the squared row (and column) norms.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qittls/linalg.hpp"
#include "qittls/random.hpp"

namespace qittls {

/// Optional counter of tree nodes read or written by one operation.
struct TouchCounter {
  std::size_t nodes = 0;
};

/// Sum tree over nonnegative weights. The tree is an implicit array padded
/// to the next power of two: node 1 is the root, node k has children 2k and
/// 2k+1, and leaf i sits at capacity + i. Padding leaves hold zero.
class WeightTree {
 public:
  WeightTree() = default;
  explicit WeightTree(std::span<const double> weights);

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t depth() const noexcept { return depth_; }

  double total() const noexcept { return nodes_[1]; }
  double weight(std::size_t i) const;
  /// Raw node value by heap index in [1, 2 * capacity).
  double node(std::size_t k) const { return nodes_.at(k); }

  /// Sets leaf i and recomputes each ancestor from its two children, so every
  /// internal node stays the floating sum of its children.
  void set(std::size_t i, double w, TouchCounter* touches = nullptr);

  /// One uniform draw u * total, then descent by cumulative sums. A child of
  /// zero weight is never entered. Throws Error(kEmptySupport) on zero total.
  std::size_t sample(Rng& rng, TouchCounter* touches = nullptr) const;

  /// Product of the branch probabilities on the root-to-leaf path of i; this
  /// is the exact probability that sample() returns i.
  double path_probability(std::size_t i) const;

  /// Recomputes every internal node bottom-up from the leaves.
  void rebuild();

  bool operator==(const WeightTree&) const = default;

 private:
  std::size_t size_ = 0;
  std::size_t capacity_ = 1;
  std::size_t depth_ = 0;
  std::vector<double> nodes_ = std::vector<double>(2, 0.0);
};

/// Sample model of a real vector: leaves hold v_i^2, and the values are kept
/// alongside so that queries return the stored entry exactly.
class SampleVector {
 public:
  SampleVector() = default;
  /// Throws Error(kNonFinite) naming the first non-finite index, and
  /// Error(kInvalidArgument) on empty input.
  explicit SampleVector(std::span<const double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double query(std::size_t i) const;
  void update(std::size_t i, double value, TouchCounter* touches = nullptr);
  double norm2() const noexcept { return tree_.total(); }
  std::size_t sample(Rng& rng, TouchCounter* touches = nullptr) const {
    return tree_.sample(rng, touches);
  }
  double path_probability(std::size_t i) const { return tree_.path_probability(i); }
  /// sign(v_i) * sqrt(leaf_i), the entry as recovered from the tree alone.
  double reconstruct(std::size_t i) const;
  void rebuild() { tree_.rebuild(); }

  std::span<const double> values() const noexcept { return values_; }
  const WeightTree& tree() const noexcept { return tree_; }

  bool operator==(const SampleVector&) const = default;

 private:
  std::vector<double> values_;
  WeightTree tree_;
};

/// Sample model of an m x n matrix with row-wise and column-wise mirrors.
/// Leaf i of the row-norm tree is exactly the root of row tree i, and the
/// same holds for columns.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  explicit SampleMatrix(const Matrix& values);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_.size(); }

  double query(std::size_t i, std::size_t j) const;
  double query_col_side(std::size_t i, std::size_t j) const;
  void update(std::size_t i, std::size_t j, double value, TouchCounter* touches = nullptr);

  double frob2() const noexcept { return row_norms_.total(); }
  double frob2_col_side() const noexcept { return col_norms_.total(); }
  double row_norm2(std::size_t i) const;
  double col_norm2(std::size_t j) const;

  /// Row i with probability ||M_i||^2 / ||M||_F^2.
  std::size_t sample_row(Rng& rng) const { return row_norms_.sample(rng); }
  /// Column j with probability M_ij^2 / ||M_i||^2.
  std::size_t sample_in_row(std::size_t i, Rng& rng) const;
  std::size_t sample_col(Rng& rng) const { return col_norms_.sample(rng); }
  std::size_t sample_in_col(std::size_t j, Rng& rng) const;

  double row_probability(std::size_t i) const;
  double col_probability(std::size_t j) const;

  std::span<const double> row(std::size_t i) const { return row_vector(i).values(); }
  std::span<const double> col(std::size_t j) const { return col_vector(j).values(); }
  const SampleVector& row_vector(std::size_t i) const;
  const SampleVector& col_vector(std::size_t j) const;
  const WeightTree& row_norm_tree() const noexcept { return row_norms_; }
  const WeightTree& col_norm_tree() const noexcept { return col_norms_; }

  void rebuild();
  Matrix to_dense() const;

 private:
  std::vector<SampleVector> rows_;
  std::vector<SampleVector> cols_;
  WeightTree row_norms_;
  WeightTree col_norms_;
};

/// Binary matrix layout (little-endian): "QSMX", u32 version = 1, u64 rows,
/// u64 cols, then rows * cols IEEE-754 doubles in row-major order.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);
void save_matrix(const std::string& path, const Matrix& m);
Matrix load_matrix(const std::string& path);

}  // namespace qittls
