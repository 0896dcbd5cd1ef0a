#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hcl/sparse_digraph.hpp"

namespace hcl {

// Jointly normalized t-order degree pair. After every completed step,
// sum(d_in) + sum(d_out) == 2: both vectors are divided by the same
// scalar a = (sum(d_in) + sum(d_out)) / 2, so the in/out ratio is
// preserved exactly.
struct DualDegreeState {
  std::vector<double> d_in;
  std::vector<double> d_out;
  std::int64_t t = 0;
};

struct DegreeTrajectory {
  std::vector<DualDegreeState> states;  // t = 1 .. t_max, in order
};

// One step: d_out' = W d_out / a, d_in' = W^T d_in / a. Entries must stay
// positive; anything below the underflow guard fails loudly.
inline constexpr double kDegreeUnderflowGuard = 1e-300;

DualDegreeState dual_degree_step(const SparseDigraph& graph,
                                 const DualDegreeState& state);

// t steps from the all-ones pair. t = 0 returns the normalized all-ones
// state (a degenerate but defined case). O(n) auxiliary space; W^t is
// never materialized.
DualDegreeState propagate(const SparseDigraph& graph, std::int64_t t);

// All snapshots t = 1..t_max from one incremental pass.
DegreeTrajectory propagate_trajectory(const SparseDigraph& graph,
                                      std::int64_t t_max);

// Explicit W^t by repeated dense multiplication, row-major. Validation
// oracle only; refuses graphs above the node cap.
std::vector<double> dense_power_oracle(const SparseDigraph& graph,
                                       std::int64_t t,
                                       std::size_t node_cap = 500);

// Un-normalized t-order degrees W^t 1 and (W^T)^t 1, kept in range by
// exact power-of-two rescaling: true value = stored value * 2^exp2.
// Ratios between entries are preserved bit-exactly, which is what the
// leave-one-out attachment rank needs.
struct ScaledDualDegrees {
  std::vector<double> d_in;
  std::vector<double> d_out;
  std::int64_t exp2 = 0;
  std::int64_t t = 0;
};

ScaledDualDegrees raw_dual_degrees(const SparseDigraph& graph, std::int64_t t);

// CSV with header: t,node_id,d_in,d_out.
void write_trajectory_csv(const DegreeTrajectory& trajectory,
                          const std::filesystem::path& path);

}  // namespace hcl
