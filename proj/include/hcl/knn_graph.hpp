#pragma once

#include <filesystem>

#include "hcl/point_set.hpp"
#include "hcl/similarity.hpp"
#include "hcl/sparse_digraph.hpp"

namespace hcl {

// Asymmetric directed kNN graph: row i holds weight 1 on the diagonal and
// sim(x_i, x_j) for the k nearest neighbors of x_i. No symmetrization.
class DirectedKnnGraph {
 public:
  DirectedKnnGraph(SparseDigraph matrix, std::size_t k);

  std::size_t size() const { return matrix_.size(); }
  std::size_t k() const { return k_; }
  const SparseDigraph& matrix() const { return matrix_; }

 private:
  SparseDigraph matrix_;
  std::size_t k_;
};

// Exhaustive exact neighbor search; equidistant candidates break ties by
// smallest point index. Requires 1 <= k < n. A point is never its own
// neighbor; the self relationship is the diagonal 1.
DirectedKnnGraph build_knn_digraph(const PointSet& points, std::size_t k,
                                   const SimilarityMeasure& measure);

// eta_i: arithmetic mean of the k off-diagonal weights of row i.
struct LocalDensityVector {
  std::vector<double> eta;
};

LocalDensityVector local_density(const DirectedKnnGraph& graph);

// Edge-list text `src dst weight`, diagonal included, row-major order.
void write_edge_list(const SparseDigraph& graph, const std::filesystem::path& path);

}  // namespace hcl
