#include "hcl/knn_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "hcl/errors.hpp"
#include "hcl/kernels.hpp"

namespace hcl {

DirectedKnnGraph::DirectedKnnGraph(SparseDigraph matrix, std::size_t k)
    : matrix_(std::move(matrix)), k_(k) {
  const std::size_t n = matrix_.size();
  if (k_ < 1 || k_ >= n) {
    throw InvalidInput("kNN graph requires 1 <= k < n");
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto cols = matrix_.row_cols(i);
    const auto vals = matrix_.row_vals(i);
    if (cols.size() != k_ + 1) {
      throw InvalidState("row without exactly k+1 entries");
    }
    bool diagonal = false;
    for (std::size_t p = 0; p < cols.size(); ++p) {
      if (cols[p] == i) {
        diagonal = vals[p] == 1.0;
      } else if (!(vals[p] >= 0.0 && vals[p] <= 1.0)) {
        throw InvalidState("edge weight outside [0,1]");
      }
    }
    if (!diagonal) {
      throw InvalidState("missing unit diagonal entry");
    }
  }
}

namespace {

struct Neighbor {
  double key;  // squared distance (gaussian) or -cosine (cosine)
  std::uint32_t id;
  double sim;
};

// (key, id) lexicographic: equidistant candidates lose to smaller ids.
bool closer(const Neighbor& a, const Neighbor& b) {
  return a.key != b.key ? a.key < b.key : a.id < b.id;
}

}  // namespace

DirectedKnnGraph build_knn_digraph(const PointSet& points, std::size_t k,
                                   const SimilarityMeasure& measure) {
  const std::size_t n = points.size();
  validate(measure);
  if (k < 1 || k >= n) {
    throw InvalidInput("kNN graph requires 1 <= k < n");
  }
  const bool gaussian = measure.kind == MeasureKind::gaussian_exponential;
  const double inv_sigma2 =
      gaussian ? 1.0 / (measure.sigma * measure.sigma) : 0.0;
  const auto& ops = kernels::active();

  std::vector<SparseDigraph::Triplet> triplets;
  triplets.reserve(n * (k + 1));
  std::vector<Neighbor> heap;  // max-heap on `closer`, worst candidate on top
  heap.reserve(k + 1);
  std::vector<double> self_norm(n, 0.0);
  if (!gaussian) {
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto p = points.point(i);
      const double nn = ops.dot(p.data(), p.data(), p.size());
      if (nn == 0.0) {
        throw InvalidInput("cosine measure undefined for the zero vector");
      }
      self_norm[i] = std::sqrt(nn);
    }
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    const auto pi = points.point(i);
    heap.clear();
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto pj = points.point(j);
      Neighbor cand;
      cand.id = j;
      if (gaussian) {
        cand.key = ops.l2sq(pi.data(), pj.data(), pi.size());
        cand.sim = std::exp(-cand.key * inv_sigma2);
      } else {
        const double c =
            std::clamp(ops.dot(pi.data(), pj.data(), pi.size()) /
                           (self_norm[i] * self_norm[j]),
                       -1.0, 1.0);
        cand.key = -c;  // same ordering and ties as the angle
        cand.sim = std::max(0.0, c);
      }
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), closer);
      } else if (closer(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), closer);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), closer);
      }
    }
    triplets.push_back({i, i, 1.0});
    for (const Neighbor& nb : heap) {
      triplets.push_back({i, nb.id, nb.sim});
    }
  }
  return DirectedKnnGraph(SparseDigraph::from_triplets(n, std::move(triplets)), k);
}

LocalDensityVector local_density(const DirectedKnnGraph& graph) {
  const std::size_t n = graph.size();
  LocalDensityVector density;
  density.eta.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto cols = graph.matrix().row_cols(i);
    const auto vals = graph.matrix().row_vals(i);
    double sum = 0.0;
    for (std::size_t p = 0; p < cols.size(); ++p) {
      if (cols[p] != i) sum += vals[p];
    }
    density.eta[i] = sum / static_cast<double>(graph.k());
  }
  return density;
}

void write_edge_list(const SparseDigraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write edge list: " + path.string());
  }
  char buf[32];
  for (std::uint32_t i = 0; i < graph.size(); ++i) {
    const auto cols = graph.row_cols(i);
    const auto vals = graph.row_vals(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      std::snprintf(buf, sizeof(buf), "%.17g", vals[p]);
      out << i << ' ' << cols[p] << ' ' << buf << '\n';
    }
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace hcl
