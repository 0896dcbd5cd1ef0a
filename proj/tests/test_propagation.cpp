#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "hcl/errors.hpp"
#include "hcl/propagation.hpp"
#include "test_support.hpp"

using hcl::DualDegreeState;
using hcl::SparseDigraph;

namespace {

double pair_sum(const DualDegreeState& state) {
  double total = 0.0;
  for (const double v : state.d_in) total += v;
  for (const double v : state.d_out) total += v;
  return total;
}

// Sum over all length-t directed paths i -> ... -> j of edge products,
// by explicit enumeration. Independent of the matrix-power route.
double path_sum(const std::vector<double>& w, std::size_t n, std::uint32_t i,
                std::uint32_t j, int t) {
  if (t == 1) return w[i * n + j];
  double total = 0.0;
  for (std::uint32_t m = 0; m < n; ++m) {
    if (w[i * n + m] == 0.0) continue;
    total += w[i * n + m] * path_sum(w, n, m, j, t - 1);
  }
  return total;
}

}  // namespace

TEST_SUITE("propagation") {

TEST_CASE("symmetric graph: one step keeps dual degrees equal") {
  const hcl::PointSet points(2, 1, {4.0, 4.0});
  const auto graph =
      hcl::build_knn_digraph(points, 1, hcl::SimilarityMeasure::gaussian(1.0));
  DualDegreeState ones;
  ones.d_in.assign(2, 1.0);
  ones.d_out.assign(2, 1.0);
  const DualDegreeState next = hcl::dual_degree_step(graph.matrix(), ones);
  CHECK(next.d_in == next.d_out);
  CHECK(next.t == 1);
}

TEST_CASE("normalization: sum(d_in) + sum(d_out) = 2 after every step") {
  for (int trial = 0; trial < 5; ++trial) {
    const auto graph = test_support::random_graph(100 + trial, 30, 3);
    DualDegreeState state;
    state.d_in.assign(30, 1.0);
    state.d_out.assign(30, 1.0);
    for (int step = 0; step < 60; ++step) {
      state = hcl::dual_degree_step(graph.matrix(), state);
      CHECK(std::abs(pair_sum(state) - 2.0) <= 1e-12);
    }
  }
}

TEST_CASE("t = 1: degrees proportional to row and column sums") {
  const auto graph = test_support::random_graph(123, 12, 3);
  const DualDegreeState state = hcl::propagate(graph.matrix(), 1);
  const auto dense = graph.matrix().dense();
  const auto rows = test_support::row_sums(dense, 12);
  const auto cols = test_support::col_sums(dense, 12);
  double total = 0.0;
  for (const double v : rows) total += v;
  for (const double v : cols) total += v;
  const double scale = total / 2.0;
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(test_support::rel_err(state.d_out[i] * scale, rows[i]) <= 1e-12);
    CHECK(test_support::rel_err(state.d_in[i] * scale, cols[i]) <= 1e-12);
  }
}

TEST_CASE("iterates match the dense power oracle up to one shared scale") {
  const std::vector<std::pair<std::size_t, int>> cases{{6, 3}, {8, 5}, {15, 20}};
  for (const auto& [n, t] : cases) {
    const auto graph = test_support::random_graph(200 + n, n, 2);
    const DualDegreeState state = hcl::propagate(graph.matrix(), t);
    const auto power = hcl::dense_power_oracle(graph.matrix(), t);
    const auto rows = test_support::row_sums(power, n);
    const auto cols = test_support::col_sums(power, n);
    double total = 0.0;
    for (const double v : rows) total += v;
    for (const double v : cols) total += v;
    const double scale = total / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(test_support::rel_err(state.d_out[i] * scale, rows[i]) <= 1e-9);
      CHECK(test_support::rel_err(state.d_in[i] * scale, cols[i]) <= 1e-9);
    }
  }
}

TEST_CASE("trajectory snapshots equal independent propagation") {
  const auto graph = test_support::random_graph(131, 10, 2);
  const auto traj = hcl::propagate_trajectory(graph.matrix(), 7);
  REQUIRE(traj.states.size() == 7);
  for (std::int64_t t = 1; t <= 7; ++t) {
    const DualDegreeState expect = hcl::propagate(graph.matrix(), t);
    const DualDegreeState& got = traj.states[static_cast<std::size_t>(t - 1)];
    CHECK(got.t == t);
    CHECK(got.d_in == expect.d_in);    // bitwise: same op order
    CHECK(got.d_out == expect.d_out);
  }
}

TEST_CASE("t = 0 is the normalized all-ones state") {
  const auto graph = test_support::random_graph(137, 9, 2);
  const DualDegreeState state = hcl::propagate(graph.matrix(), 0);
  CHECK(state.t == 0);
  for (const double v : state.d_in) CHECK(v == doctest::Approx(1.0 / 9).epsilon(1e-15));
  CHECK(std::abs(pair_sum(state) - 2.0) <= 1e-12);
  CHECK_THROWS_AS(hcl::propagate(graph.matrix(), -1), hcl::InvalidInput);
}

TEST_CASE("positivity holds for deep powers") {
  const auto graph = test_support::random_graph(139, 25, 3);
  const DualDegreeState state = hcl::propagate(graph.matrix(), 200);
  for (const double v : state.d_in) CHECK(v > 0.0);
  for (const double v : state.d_out) CHECK(v > 0.0);
}

TEST_CASE("determinism: repeated runs are bitwise identical") {
  const auto graph = test_support::random_graph(149, 40, 4);
  const DualDegreeState a = hcl::propagate(graph.matrix(), 23);
  const DualDegreeState b = hcl::propagate(graph.matrix(), 23);
  CHECK(std::memcmp(a.d_in.data(), b.d_in.data(), 40 * sizeof(double)) == 0);
  CHECK(std::memcmp(a.d_out.data(), b.d_out.data(), 40 * sizeof(double)) == 0);
}

TEST_CASE("dense oracle: t = 1 is the matrix itself") {
  const auto graph = test_support::random_graph(151, 7, 2);
  CHECK(hcl::dense_power_oracle(graph.matrix(), 1) == graph.matrix().dense());
}

TEST_CASE("dense oracle: entries are sums over all paths") {
  const auto graph = test_support::random_graph(157, 5, 2);
  const auto dense = graph.matrix().dense();
  for (const int t : {2, 3}) {
    const auto power = hcl::dense_power_oracle(graph.matrix(), t);
    for (std::uint32_t i = 0; i < 5; ++i) {
      for (std::uint32_t j = 0; j < 5; ++j) {
        CHECK(power[i * 5 + j] ==
              doctest::Approx(path_sum(dense, 5, i, j, t)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("dense oracle: permutation conjugation") {
  const std::size_t n = 6;
  const auto graph = test_support::random_graph(163, n, 2);
  std::vector<std::uint32_t> perm{3, 0, 5, 1, 4, 2};
  std::vector<SparseDigraph::Triplet> triplets;
  const auto dense = graph.matrix().dense();
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (dense[i * n + j] != 0.0) {
        triplets.push_back({perm[i], perm[j], dense[i * n + j]});
      }
    }
  }
  const auto conj = SparseDigraph::from_triplets(n, std::move(triplets));
  const auto p0 = hcl::dense_power_oracle(graph.matrix(), 4);
  const auto p1 = hcl::dense_power_oracle(conj, 4);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      CHECK(p1[perm[i] * n + perm[j]] == doctest::Approx(p0[i * n + j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("dense oracle refuses graphs above the cap") {
  const auto graph = test_support::random_graph(167, 10, 2);
  CHECK_THROWS_AS(hcl::dense_power_oracle(graph.matrix(), 2, 5), hcl::InvalidInput);
  CHECK_THROWS_AS(hcl::dense_power_oracle(graph.matrix(), 0), hcl::InvalidInput);
}

TEST_CASE("step rejects invalid states") {
  const auto graph = test_support::random_graph(173, 6, 2);
  DualDegreeState bad;
  bad.d_in.assign(6, 1.0);
  bad.d_out.assign(6, 1.0);
  bad.d_in[2] = 0.0;
  CHECK_THROWS_AS(hcl::dual_degree_step(graph.matrix(), bad), hcl::InvalidState);
  DualDegreeState wrong;
  wrong.d_in.assign(5, 1.0);
  wrong.d_out.assign(5, 1.0);
  CHECK_THROWS_AS(hcl::dual_degree_step(graph.matrix(), wrong), hcl::InvalidInput);
}

TEST_CASE("underflow guard fails loudly") {
  // Two disconnected self-loops of wildly different weight: the weak
  // node's degrees shrink by 1e-250 per step after normalization.
  std::vector<SparseDigraph::Triplet> triplets{{0, 0, 1.0}, {1, 1, 1e-250}};
  const auto graph = SparseDigraph::from_triplets(2, std::move(triplets));
  DualDegreeState state;
  state.d_in.assign(2, 1.0);
  state.d_out.assign(2, 1.0);
  state = hcl::dual_degree_step(graph, state);
  CHECK_THROWS_AS(hcl::dual_degree_step(graph, state), hcl::InvalidState);
}

TEST_CASE("raw degrees: match dense sums exactly at small t") {
  const auto graph = test_support::random_graph(179, 9, 3);
  const auto raw = hcl::raw_dual_degrees(graph.matrix(), 6);
  CHECK(raw.exp2 == 0);
  const auto power = hcl::dense_power_oracle(graph.matrix(), 6);
  const auto rows = test_support::row_sums(power, 9);
  const auto cols = test_support::col_sums(power, 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(test_support::rel_err(raw.d_out[i], rows[i]) <= 1e-12);
    CHECK(test_support::rel_err(raw.d_in[i], cols[i]) <= 1e-12);
  }
}

TEST_CASE("raw degrees: rescaling preserves ratios for deep powers") {
  const auto graph = test_support::random_graph(181, 50, 5, 2.0);
  const auto raw = hcl::raw_dual_degrees(graph.matrix(), 600);
  CHECK(raw.exp2 > 0);  // growth forced at least one rescale
  const auto state = hcl::propagate(graph.matrix(), 600);
  for (std::size_t i = 0; i < 50; ++i) {
    const double hbar_raw = raw.d_in[i] / raw.d_out[i];
    const double hbar_norm = state.d_in[i] / state.d_out[i];
    CHECK(test_support::rel_err(hbar_raw, hbar_norm) <= 1e-12);
  }
}

}  // TEST_SUITE
