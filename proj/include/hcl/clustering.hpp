#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcl/hi_analysis.hpp"
#include "hcl/knn_graph.hpp"
#include "hcl/labeling.hpp"
#include "hcl/propagation.hpp"

namespace hcl {

// Disjoint clusters over the core set, each sorted ascending, ordered by
// smallest member. Cluster j carries label j+1.
struct CoreClusters {
  std::vector<std::vector<std::uint32_t>> clusters;

  std::size_t count() const { return clusters.size(); }
};

// Mutual-kNN merging inside the core set, processed from the largest
// homophily-weighted similarity hsim(i,j) = hbar_i * hbar_j * sim(i,j)
// downward (ties by ascending pair). Stops early at target_c components,
// otherwise runs until the mutual-link candidates are exhausted.
CoreClusters merge_cores(const PointSet& points,
                         std::span<const std::uint32_t> cores,
                         const HomophilyCoefficients& coeffs,
                         const SimilarityMeasure& measure, int k_c,
                         std::optional<std::size_t> target_c = std::nullopt);

// Leave-one-out attachment preference of node `query` for `cluster`:
// rho = 1 - gamma_without / gamma_with, gamma = d_in * d_out of order t,
// degrees taken on the given graph and on the subgraph with `cluster`
// deleted. Ids are local to `cluster_graph` (the graph already restricted
// to the cluster set).
double attachment_score(const SparseDigraph& cluster_graph, std::uint32_t query,
                        std::span<const std::uint32_t> cluster, std::int64_t t);

// Labels every point: core members keep their merge labels, non-core
// members of c_cluster attach to the cluster maximizing rho (ties to the
// smallest cluster index), everything outside c_cluster is noise. One
// subgraph propagation per cluster, shared across all queries.
Labeling aggregate_to_cores(const SparseDigraph& graph,
                            std::span<const std::uint32_t> c_cluster,
                            const CoreClusters& core_clusters, std::int64_t t);

struct PipelineConfig {
  std::size_t k = 10;
  int k_c = 5;  // merge neighborhood size, in [1, 5]
  SimilarityMeasure measure;
  std::int64_t t_max = 200;
  std::optional<std::size_t> target_c;
  std::optional<std::size_t> jump_threshold;  // default max(2, ceil(0.01 n))
};

struct PipelineDiagnostics {
  std::size_t n = 0;
  std::size_t k = 0;
  int k_c = 0;
  double sigma = 0.0;
  std::string measure;
  std::string kernel;
  std::int64_t t_max = 0;
  std::int64_t t_end = 0;  // last completed power (underflow can end early)
  std::size_t jump_threshold = 0;
  ResidualTrajectory residual;
  // g_t per power; NaN where the core set is empty.
  std::vector<std::pair<std::int64_t, double>> g_curve;
  std::vector<std::int64_t> jumps;
  std::int64_t first_jump = 0;
  std::int64_t t_star = 0;
  std::vector<std::uint32_t> c_max;
  std::vector<std::uint32_t> c_cluster;
  std::vector<std::uint32_t> cores;  // merged core set at t_star
  std::size_t cluster_count = 0;
};

struct PipelineResult {
  Labeling labels;
  PipelineDiagnostics diagnostics;
  DualDegreeState state_star;  // degrees at t_star, for HI emission
};

// Full pipeline: graph -> degree sweep -> jumps -> boundary -> optimal t
// -> core merge -> attachment. Fails with SelectionFailed when no jump
// transition occurs within t_max.
PipelineResult homophilic_clustering(const PointSet& points,
                                     const PipelineConfig& config);

}  // namespace hcl
