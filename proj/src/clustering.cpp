#include "hcl/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hcl/errors.hpp"
#include "hcl/kernels.hpp"

namespace hcl {

namespace {

struct DisjointSet {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint32_t> rank;

  explicit DisjointSet(std::size_t n) : parent(n), rank(n, 0) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
    return true;
  }
};

struct MergeCandidate {
  double hsim;
  std::uint32_t a, b;  // local core indices, a < b
};

}  // namespace

CoreClusters merge_cores(const PointSet& points,
                         std::span<const std::uint32_t> cores,
                         const HomophilyCoefficients& coeffs,
                         const SimilarityMeasure& measure, int k_c,
                         std::optional<std::size_t> target_c) {
  const std::size_t m = cores.size();
  if (m == 0) {
    throw InvalidInput("merge requires a non-empty core set");
  }
  if (k_c < 1) {
    throw InvalidInput("merge requires k_c >= 1");
  }
  if (coeffs.hbar.size() != points.size()) {
    throw InvalidInput("coefficient vector does not match point count");
  }
  for (std::size_t p = 0; p < m; ++p) {
    if (cores[p] >= points.size() || (p > 0 && cores[p] <= cores[p - 1])) {
      throw InvalidInput("core ids must be ascending and in range");
    }
  }
  if (target_c && (*target_c < 1 || *target_c > m)) {
    throw InvalidInput("target cluster count out of range");
  }
  validate(measure);

  // k_c nearest core neighbors of every core, ties by smallest index.
  const std::size_t k_eff = std::min<std::size_t>(k_c, m - 1);
  std::vector<std::uint32_t> neighbors(m * k_eff);
  std::vector<std::pair<double, std::uint32_t>> order;
  if (k_eff > 0) {
    order.reserve(m - 1);
    for (std::size_t p = 0; p < m; ++p) {
      order.clear();
      const auto pp = points.point(cores[p]);
      for (std::size_t q = 0; q < m; ++q) {
        if (q == p) continue;
        order.emplace_back(
            neighbor_distance(pp, points.point(cores[q]), measure),
            static_cast<std::uint32_t>(q));
      }
      std::partial_sort(order.begin(), order.begin() + k_eff, order.end());
      for (std::size_t s = 0; s < k_eff; ++s) {
        neighbors[p * k_eff + s] = order[s].second;
      }
    }
  }

  // Mutual links only: each endpoint inside the other's k_c core-NNs.
  const auto linked = [&](std::uint32_t from, std::uint32_t to) {
    const auto* begin = neighbors.data() + from * k_eff;
    return std::find(begin, begin + k_eff, to) != begin + k_eff;
  };
  std::vector<MergeCandidate> candidates;
  for (std::uint32_t p = 0; p < m; ++p) {
    for (std::size_t s = 0; s < k_eff; ++s) {
      const std::uint32_t q = neighbors[p * k_eff + s];
      if (q > p && linked(q, p)) {
        const double sim_pq =
            similarity(points.point(cores[p]), points.point(cores[q]), measure);
        candidates.push_back(
            {coeffs.hbar[cores[p]] * coeffs.hbar[cores[q]] * sim_pq, p, q});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const MergeCandidate& x, const MergeCandidate& y) {
              if (x.hsim != y.hsim) return x.hsim > y.hsim;
              return x.a != y.a ? x.a < y.a : x.b < y.b;
            });

  DisjointSet dsu(m);
  std::size_t components = m;
  for (const MergeCandidate& cand : candidates) {
    if (target_c && components == *target_c) break;
    if (dsu.unite(cand.a, cand.b)) {
      --components;
    }
  }

  // Components in ascending order of their smallest member.
  std::vector<std::int64_t> cluster_of_root(m, -1);
  CoreClusters result;
  for (std::uint32_t p = 0; p < m; ++p) {
    const std::uint32_t root = dsu.find(p);
    if (cluster_of_root[root] < 0) {
      cluster_of_root[root] = static_cast<std::int64_t>(result.clusters.size());
      result.clusters.emplace_back();
    }
    result.clusters[cluster_of_root[root]].push_back(cores[p]);
  }
  return result;
}

namespace {

// rho = 1 - gamma_without/gamma_with, evaluated so that identical degree
// products cancel bit-exactly (the scales are powers of two).
double rho_from(const ScaledDualDegrees& with, const ScaledDualDegrees& without,
                std::uint32_t node_with, std::uint32_t node_without) {
  const double num = without.d_in[node_without] * without.d_out[node_without];
  const double den = with.d_in[node_with] * with.d_out[node_with];
  if (!(den > 0.0) || !(num >= 0.0)) {
    throw InvalidState("vanishing product rank; graph lacks self-loops?");
  }
  const double ratio =
      std::ldexp(num / den, static_cast<int>(2 * (without.exp2 - with.exp2)));
  return 1.0 - ratio;
}

std::vector<std::uint32_t> complement_of(std::size_t n,
                                         std::span<const std::uint32_t> removed) {
  std::vector<bool> gone(n, false);
  for (const std::uint32_t id : removed) gone[id] = true;
  std::vector<std::uint32_t> keep;
  keep.reserve(n - removed.size());
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!gone[i]) keep.push_back(i);
  }
  return keep;
}

}  // namespace

double attachment_score(const SparseDigraph& cluster_graph, std::uint32_t query,
                        std::span<const std::uint32_t> cluster, std::int64_t t) {
  const std::size_t n = cluster_graph.size();
  if (query >= n) {
    throw InvalidInput("query id out of range");
  }
  if (t < 1) {
    throw InvalidInput("attachment requires t >= 1");
  }
  for (std::size_t p = 0; p < cluster.size(); ++p) {
    if (cluster[p] >= n || (p > 0 && cluster[p] <= cluster[p - 1])) {
      throw InvalidInput("cluster ids must be ascending and in range");
    }
    if (cluster[p] == query) {
      throw InvalidInput("query must lie outside the removed cluster");
    }
  }
  if (n - cluster.size() < 2) {
    throw InvalidInput("degenerate subgraph: fewer than 2 surviving points");
  }

  const ScaledDualDegrees full = raw_dual_degrees(cluster_graph, t);
  const std::vector<std::uint32_t> keep = complement_of(n, cluster);
  const SparseDigraph sub = cluster_graph.induce(keep);
  const ScaledDualDegrees removed = raw_dual_degrees(sub, t);
  const auto it = std::lower_bound(keep.begin(), keep.end(), query);
  const auto query_local = static_cast<std::uint32_t>(it - keep.begin());
  return rho_from(full, removed, query, query_local);
}

Labeling aggregate_to_cores(const SparseDigraph& graph,
                            std::span<const std::uint32_t> c_cluster,
                            const CoreClusters& core_clusters, std::int64_t t) {
  const std::size_t n = graph.size();
  const std::size_t c = core_clusters.count();
  if (c == 0) {
    throw InvalidInput("aggregation requires at least one core cluster");
  }
  if (t < 1) {
    throw InvalidInput("aggregation requires t >= 1");
  }
  for (std::size_t p = 0; p < c_cluster.size(); ++p) {
    if (c_cluster[p] >= n || (p > 0 && c_cluster[p] <= c_cluster[p - 1])) {
      throw InvalidInput("cluster-set ids must be ascending and in range");
    }
  }

  Labeling labels;
  labels.label.assign(n, Labeling::kNoise);
  std::vector<std::int64_t> local_of(n, -1);
  for (std::size_t p = 0; p < c_cluster.size(); ++p) {
    local_of[c_cluster[p]] = static_cast<std::int64_t>(p);
  }
  for (std::size_t j = 0; j < c; ++j) {
    for (const std::uint32_t id : core_clusters.clusters[j]) {
      if (id >= n || local_of[id] < 0) {
        throw InvalidInput("core id outside the cluster set");
      }
      labels.label[id] = static_cast<std::uint32_t>(j + 1);
    }
  }

  std::vector<std::uint32_t> queries;  // local ids of non-core members
  for (std::size_t p = 0; p < c_cluster.size(); ++p) {
    if (labels.label[c_cluster[p]] == Labeling::kNoise) {
      queries.push_back(static_cast<std::uint32_t>(p));
    }
  }
  if (queries.empty()) {
    return labels;
  }
  if (c == 1) {
    // Single candidate cluster; no leave-one-out comparison needed.
    for (const std::uint32_t q : queries) {
      labels.label[c_cluster[q]] = 1;
    }
    return labels;
  }

  const SparseDigraph cluster_graph = graph.induce(c_cluster);
  const std::size_t m = cluster_graph.size();
  const ScaledDualDegrees full = raw_dual_degrees(cluster_graph, t);

  std::vector<double> best_rho(queries.size(),
                               -std::numeric_limits<double>::infinity());
  std::vector<std::uint32_t> best_cluster(queries.size(), 0);
  std::vector<std::uint32_t> removed_local;
  for (std::size_t j = 0; j < c; ++j) {
    removed_local.clear();
    for (const std::uint32_t id : core_clusters.clusters[j]) {
      removed_local.push_back(static_cast<std::uint32_t>(local_of[id]));
    }
    std::sort(removed_local.begin(), removed_local.end());
    if (m - removed_local.size() < 2) {
      throw InvalidInput("degenerate subgraph: fewer than 2 surviving points");
    }
    const std::vector<std::uint32_t> keep = complement_of(m, removed_local);
    const SparseDigraph sub = cluster_graph.induce(keep);
    const ScaledDualDegrees removed = raw_dual_degrees(sub, t);
    std::vector<std::int64_t> sub_of(m, -1);
    for (std::size_t p = 0; p < keep.size(); ++p) {
      sub_of[keep[p]] = static_cast<std::int64_t>(p);
    }
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      const std::uint32_t q = queries[qi];
      const double rho =
          rho_from(full, removed, q, static_cast<std::uint32_t>(sub_of[q]));
      if (rho > best_rho[qi]) {
        best_rho[qi] = rho;
        best_cluster[qi] = static_cast<std::uint32_t>(j + 1);
      }
    }
  }
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    labels.label[c_cluster[queries[qi]]] = best_cluster[qi];
  }
  return labels;
}

PipelineResult homophilic_clustering(const PointSet& points,
                                     const PipelineConfig& config) {
  if (config.k_c < 1 || config.k_c > 5) {
    throw InvalidInput("k_c must lie in [1, 5]");
  }
  if (config.t_max < 1) {
    throw InvalidInput("t_max must be >= 1");
  }
  const std::size_t n = points.size();

  PipelineResult result;
  PipelineDiagnostics& diag = result.diagnostics;
  diag.n = n;
  diag.k = config.k;
  diag.k_c = config.k_c;
  diag.sigma = config.measure.sigma;
  diag.measure = config.measure.kind == MeasureKind::gaussian_exponential
                     ? "gaussian"
                     : "cosine";
  diag.kernel = kernels::active().name;
  diag.t_max = config.t_max;
  diag.jump_threshold =
      config.jump_threshold ? *config.jump_threshold : default_jump_threshold(n);

  const DirectedKnnGraph graph = build_knn_digraph(points, config.k, config.measure);
  const LocalDensityVector density = local_density(graph);

  // One streaming sweep: residual distance and g_t per power, O(n) state.
  // The sweep stops early when a step hits the degree underflow guard:
  // everything up to that power is valid, beyond it hbar would be
  // corrupted. The reached horizon is recorded in the diagnostics.
  DualDegreeState state;
  state.d_in.assign(n, 1.0);
  state.d_out.assign(n, 1.0);
  state.t = 0;
  std::int64_t t_end = 0;
  for (std::int64_t t = 1; t <= config.t_max; ++t) {
    try {
      state = dual_degree_step(graph.matrix(), state);
    } catch (const InvalidState&) {
      break;
    }
    t_end = t;
    const HomophilyCoefficients coeffs = homophilic_coefficients(state);
    const HiProfile profile = hi_profile(state);
    diag.residual.t.push_back(t);
    diag.residual.r.push_back(residual_distance(profile, coeffs));
    bool has_core = false;
    for (const double h : coeffs.hbar) {
      if (h >= 1.0) {
        has_core = true;
        break;
      }
    }
    diag.g_curve.emplace_back(
        t, has_core ? geometric_mean_truncated(state, coeffs)
                    : std::numeric_limits<double>::quiet_NaN());
  }
  diag.t_end = t_end;

  diag.jumps = detect_jump_transitions(diag.residual, diag.jump_threshold);
  diag.residual.jumps = diag.jumps;
  if (diag.jumps.empty()) {
    throw SelectionFailed(
        "no jump transition detected; increase t_max and rerun");
  }
  diag.first_jump = diag.jumps.front();

  // Largest cores at the power where the noise layer just percolated.
  const DualDegreeState state_first =
      propagate(graph.matrix(), diag.first_jump);
  diag.c_max = extract_cores(homophilic_coefficients(state_first));
  if (diag.c_max.empty()) {
    throw SelectionFailed("empty core set at the first jump transition");
  }
  diag.c_cluster = noise_boundary(density, diag.c_max);

  // Optimal power: smallest local max of g_t in the feasible interval.
  const std::int64_t t_hi = diag.jumps.size() >= 2 ? diag.jumps[1] - 1 : t_end;
  std::int64_t t_star = -1;
  const auto g_at = [&](std::int64_t t) {
    return diag.g_curve[static_cast<std::size_t>(t - 1)].second;
  };
  for (std::int64_t t = diag.first_jump; t <= t_hi; ++t) {
    if (std::isnan(g_at(t))) continue;
    const bool left_ok = t == diag.first_jump || std::isnan(g_at(t - 1)) ||
                         g_at(t) >= g_at(t - 1);
    const bool right_ok =
        t == t_hi || std::isnan(g_at(t + 1)) || g_at(t) >= g_at(t + 1);
    if (left_ok && right_ok) {
      t_star = t;
      break;
    }
  }
  if (t_star < 0) {
    throw SelectionFailed("no usable core set inside the feasible interval");
  }
  diag.t_star = t_star;

  result.state_star = propagate(graph.matrix(), t_star);
  const HomophilyCoefficients coeffs_star =
      homophilic_coefficients(result.state_star);
  std::vector<std::uint32_t> cores_star = extract_cores(coeffs_star);

  // Aggregation assumes cores inside the cluster set; drop strays that
  // fell outside the density boundary.
  std::vector<std::uint32_t> cores_used;
  std::vector<bool> in_cluster_set(n, false);
  for (const std::uint32_t id : diag.c_cluster) in_cluster_set[id] = true;
  for (const std::uint32_t id : cores_star) {
    if (in_cluster_set[id]) cores_used.push_back(id);
  }
  if (cores_used.empty()) {
    throw SelectionFailed("no core points inside the cluster boundary");
  }
  diag.cores = cores_used;

  const CoreClusters merged =
      merge_cores(points, cores_used, coeffs_star, config.measure, config.k_c,
                  config.target_c);
  diag.cluster_count = merged.count();

  result.labels =
      aggregate_to_cores(graph.matrix(), diag.c_cluster, merged, t_star);
  return result;
}

}  // namespace hcl
