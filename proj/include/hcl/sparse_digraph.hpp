#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hcl {

// Square sparse weighted digraph held in both row-compressed (for W*x)
// and column-compressed (for W^T*x) form. Entries within a row, and
// within a column, are stored in ascending index order, which fixes the
// summation order of every product.
class SparseDigraph {
 public:
  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    double value;
  };

  SparseDigraph() = default;

  // Entries may arrive in any order; duplicates are rejected.
  static SparseDigraph from_triplets(std::size_t n, std::vector<Triplet> entries);

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return cols_.size(); }

  std::span<const std::uint32_t> row_cols(std::uint32_t i) const {
    return {cols_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_vals(std::uint32_t i) const {
    return {vals_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const std::uint32_t> col_rows(std::uint32_t j) const {
    return {rows_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }
  std::span<const double> col_vals(std::uint32_t j) const {
    return {tvals_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }

  // Zero when the entry is absent.
  double entry(std::uint32_t i, std::uint32_t j) const;

  // y = W x  /  y = W^T x. x and y must have length n and not alias.
  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  // Subgraph on `keep` (ascending node ids): rows and columns of every
  // other node are deleted, surviving edges keep their weights. Node p of
  // the result is keep[p].
  SparseDigraph induce(std::span<const std::uint32_t> keep) const;

  // Dense row-major copy, for oracles and small-scale checks.
  std::vector<double> dense() const;

 private:
  void build_transpose();

  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_;  // n+1
  std::vector<std::uint32_t> cols_;   // ascending within each row
  std::vector<double> vals_;
  std::vector<std::size_t> col_ptr_;  // n+1
  std::vector<std::uint32_t> rows_;   // ascending within each column
  std::vector<double> tvals_;
};

}  // namespace hcl
