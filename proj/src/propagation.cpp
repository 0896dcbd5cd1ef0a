#include "hcl/propagation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>

#include "hcl/errors.hpp"

namespace hcl {

namespace {

void check_state(const SparseDigraph& graph, const DualDegreeState& state) {
  if (state.d_in.size() != graph.size() || state.d_out.size() != graph.size()) {
    throw InvalidInput("degree state length does not match graph size");
  }
  for (std::size_t i = 0; i < state.d_in.size(); ++i) {
    if (!(state.d_in[i] > 0.0) || !(state.d_out[i] > 0.0)) {
      throw InvalidState("degree entries must be strictly positive");
    }
  }
}

// Shared-scalar normalization step:
//   next_out = W out / a,  next_in = W^T in / a,
//   a = (sum next_in + sum next_out) / 2  (sums taken before dividing).
void step_into(const SparseDigraph& graph, const std::vector<double>& in,
               const std::vector<double>& out, std::vector<double>& next_in,
               std::vector<double>& next_out) {
  graph.multiply(out, next_out);
  graph.multiply_transpose(in, next_in);
  double total = 0.0;
  for (const double v : next_in) total += v;
  for (const double v : next_out) total += v;
  const double a = 0.5 * total;
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidState("degenerate normalizer in degree step");
  }
  const double inv_a = 1.0 / a;
  double min_entry = HUGE_VAL;
  for (double& v : next_in) {
    v *= inv_a;
    min_entry = std::min(min_entry, v);
  }
  for (double& v : next_out) {
    v *= inv_a;
    min_entry = std::min(min_entry, v);
  }
  if (min_entry < kDegreeUnderflowGuard) {
    throw InvalidState("degree underflow below guard; weights too small");
  }
}

DualDegreeState normalized_ones(std::size_t n) {
  DualDegreeState state;
  const double v = 1.0 / static_cast<double>(n);
  state.d_in.assign(n, v);
  state.d_out.assign(n, v);
  state.t = 0;
  return state;
}

}  // namespace

DualDegreeState dual_degree_step(const SparseDigraph& graph,
                                 const DualDegreeState& state) {
  check_state(graph, state);
  DualDegreeState next;
  next.d_in.resize(graph.size());
  next.d_out.resize(graph.size());
  step_into(graph, state.d_in, state.d_out, next.d_in, next.d_out);
  next.t = state.t + 1;
  return next;
}

DualDegreeState propagate(const SparseDigraph& graph, std::int64_t t) {
  if (t < 0) {
    throw InvalidInput("propagation order t must be >= 0");
  }
  if (t == 0) {
    return normalized_ones(graph.size());
  }
  const std::size_t n = graph.size();
  DualDegreeState state;
  state.d_in.assign(n, 1.0);
  state.d_out.assign(n, 1.0);
  std::vector<double> next_in(n), next_out(n);
  for (std::int64_t step = 0; step < t; ++step) {
    step_into(graph, state.d_in, state.d_out, next_in, next_out);
    state.d_in.swap(next_in);
    state.d_out.swap(next_out);
  }
  state.t = t;
  return state;
}

DegreeTrajectory propagate_trajectory(const SparseDigraph& graph,
                                      std::int64_t t_max) {
  if (t_max < 1) {
    throw InvalidInput("trajectory requires t_max >= 1");
  }
  DegreeTrajectory traj;
  traj.states.reserve(static_cast<std::size_t>(t_max));
  const std::size_t n = graph.size();
  DualDegreeState state;
  state.d_in.assign(n, 1.0);
  state.d_out.assign(n, 1.0);
  std::vector<double> next_in(n), next_out(n);
  for (std::int64_t t = 1; t <= t_max; ++t) {
    step_into(graph, state.d_in, state.d_out, next_in, next_out);
    state.d_in.swap(next_in);
    state.d_out.swap(next_out);
    state.t = t;
    traj.states.push_back(state);
  }
  return traj;
}

std::vector<double> dense_power_oracle(const SparseDigraph& graph,
                                       std::int64_t t, std::size_t node_cap) {
  const std::size_t n = graph.size();
  if (n > node_cap) {
    throw InvalidInput("dense power oracle refused: n exceeds the cap of " +
                       std::to_string(node_cap));
  }
  if (t < 1) {
    throw InvalidInput("dense power oracle requires t >= 1");
  }
  const std::vector<double> w = graph.dense();
  std::vector<double> result = w;
  std::vector<double> next(n * n);
  for (std::int64_t step = 1; step < t; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m < n; ++m) {
        const double r = result[i * n + m];
        if (r == 0.0) continue;
        const double* wrow = w.data() + m * n;
        double* nrow = next.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) {
          nrow[j] += r * wrow[j];
        }
      }
    }
    result.swap(next);
  }
  return result;
}

ScaledDualDegrees raw_dual_degrees(const SparseDigraph& graph, std::int64_t t) {
  if (t < 0) {
    throw InvalidInput("propagation order t must be >= 0");
  }
  const std::size_t n = graph.size();
  ScaledDualDegrees result;
  result.d_in.assign(n, 1.0);
  result.d_out.assign(n, 1.0);
  std::vector<double> next_in(n), next_out(n);
  // Rescale by 2^-256 whenever entries pass 2^256: exact in binary
  // floating point, so entry ratios are untouched, and products of two
  // entries stay finite.
  const double rescale_limit = std::ldexp(1.0, 256);
  const double rescale_factor = std::ldexp(1.0, -256);
  for (std::int64_t step = 0; step < t; ++step) {
    graph.multiply(result.d_out, next_out);
    graph.multiply_transpose(result.d_in, next_in);
    result.d_in.swap(next_in);
    result.d_out.swap(next_out);
    double max_entry = 0.0;
    for (const double v : result.d_in) max_entry = std::max(max_entry, v);
    for (const double v : result.d_out) max_entry = std::max(max_entry, v);
    if (!std::isfinite(max_entry)) {
      throw InvalidState("raw degree overflow");
    }
    if (max_entry > rescale_limit) {
      for (double& v : result.d_in) v *= rescale_factor;
      for (double& v : result.d_out) v *= rescale_factor;
      result.exp2 += 256;
    }
  }
  result.t = t;
  return result;
}

void write_trajectory_csv(const DegreeTrajectory& trajectory,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write trajectory: " + path.string());
  }
  out << "t,node_id,d_in,d_out\n";
  char in_buf[32], out_buf[32];
  for (const DualDegreeState& state : trajectory.states) {
    for (std::size_t i = 0; i < state.d_in.size(); ++i) {
      std::snprintf(in_buf, sizeof(in_buf), "%.17g", state.d_in[i]);
      std::snprintf(out_buf, sizeof(out_buf), "%.17g", state.d_out[i]);
      out << state.t << ',' << i << ',' << in_buf << ',' << out_buf << '\n';
    }
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace hcl
