#include "hcl/sparse_digraph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcl/errors.hpp"
#include "hcl/kernels.hpp"

namespace hcl {

SparseDigraph SparseDigraph::from_triplets(std::size_t n,
                                           std::vector<Triplet> entries) {
  if (n == 0) {
    throw InvalidInput("graph requires at least one node");
  }
  for (const Triplet& e : entries) {
    if (e.row >= n || e.col >= n) {
      throw InvalidInput("triplet index out of range");
    }
    if (!std::isfinite(e.value)) {
      throw InvalidInput("triplet value must be finite");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
      throw InvalidInput("duplicate triplet at (" + std::to_string(entries[i].row) +
                         "," + std::to_string(entries[i].col) + ")");
    }
  }

  SparseDigraph g;
  g.n_ = n;
  g.row_ptr_.assign(n + 1, 0);
  g.cols_.reserve(entries.size());
  g.vals_.reserve(entries.size());
  for (const Triplet& e : entries) {
    ++g.row_ptr_[e.row + 1];
    g.cols_.push_back(e.col);
    g.vals_.push_back(e.value);
  }
  for (std::size_t i = 0; i < n; ++i) {
    g.row_ptr_[i + 1] += g.row_ptr_[i];
  }
  g.build_transpose();
  return g;
}

void SparseDigraph::build_transpose() {
  col_ptr_.assign(n_ + 1, 0);
  rows_.resize(cols_.size());
  tvals_.resize(cols_.size());
  for (const std::uint32_t c : cols_) {
    ++col_ptr_[c + 1];
  }
  for (std::size_t j = 0; j < n_; ++j) {
    col_ptr_[j + 1] += col_ptr_[j];
  }
  std::vector<std::size_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  // Row-major scan keeps each column's rows ascending.
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const std::uint32_t c = cols_[p];
      rows_[cursor[c]] = i;
      tvals_[cursor[c]] = vals_[p];
      ++cursor[c];
    }
  }
}

double SparseDigraph::entry(std::uint32_t i, std::uint32_t j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return vals_[row_ptr_[i] + static_cast<std::size_t>(it - cols.begin())];
}

void SparseDigraph::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw InvalidInput("vector length does not match graph size");
  }
  const auto& ops = kernels::active();
  for (std::uint32_t i = 0; i < n_; ++i) {
    const std::size_t begin = row_ptr_[i];
    y[i] = ops.gather_dot(vals_.data() + begin, cols_.data() + begin, x.data(),
                          row_ptr_[i + 1] - begin);
  }
}

void SparseDigraph::multiply_transpose(std::span<const double> x,
                                       std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) {
    throw InvalidInput("vector length does not match graph size");
  }
  const auto& ops = kernels::active();
  for (std::uint32_t j = 0; j < n_; ++j) {
    const std::size_t begin = col_ptr_[j];
    y[j] = ops.gather_dot(tvals_.data() + begin, rows_.data() + begin, x.data(),
                          col_ptr_[j + 1] - begin);
  }
}

SparseDigraph SparseDigraph::induce(std::span<const std::uint32_t> keep) const {
  if (keep.empty()) {
    throw InvalidInput("induced subgraph requires at least one node");
  }
  std::vector<std::int64_t> remap(n_, -1);
  for (std::size_t p = 0; p < keep.size(); ++p) {
    if (keep[p] >= n_ || (p > 0 && keep[p] <= keep[p - 1])) {
      throw InvalidInput("induce expects strictly ascending node ids in range");
    }
    remap[keep[p]] = static_cast<std::int64_t>(p);
  }

  SparseDigraph g;
  g.n_ = keep.size();
  g.row_ptr_.assign(g.n_ + 1, 0);
  for (std::size_t p = 0; p < keep.size(); ++p) {
    const std::uint32_t i = keep[p];
    for (std::size_t q = row_ptr_[i]; q < row_ptr_[i + 1]; ++q) {
      if (remap[cols_[q]] >= 0) {
        g.cols_.push_back(static_cast<std::uint32_t>(remap[cols_[q]]));
        g.vals_.push_back(vals_[q]);
        ++g.row_ptr_[p + 1];
      }
    }
  }
  for (std::size_t p = 0; p < g.n_; ++p) {
    g.row_ptr_[p + 1] += g.row_ptr_[p];
  }
  g.build_transpose();
  return g;
}

std::vector<double> SparseDigraph::dense() const {
  std::vector<double> m(n_ * n_, 0.0);
  for (std::uint32_t i = 0; i < n_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      m[static_cast<std::size_t>(i) * n_ + cols_[p]] = vals_[p];
    }
  }
  return m;
}

}  // namespace hcl
