#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "hcl/knn_graph.hpp"
#include "hcl/labeling.hpp"
#include "hcl/propagation.hpp"

namespace hcl {

// Out-degrees sorted descending (ties by ascending node id), in-degrees
// carried by the same permutation. perm maps rank position -> node id.
struct HiProfile {
  std::vector<double> sorted_out;
  std::vector<double> permuted_in;
  std::vector<std::uint32_t> perm;
  std::int64_t t = 0;
};

HiProfile hi_profile(const DualDegreeState& state);

// hbar_i = d_in_i / d_out_i.
struct HomophilyCoefficients {
  std::vector<double> hbar;
};

HomophilyCoefficients homophilic_coefficients(const DualDegreeState& state);

// Node ids with hbar >= 1 (closed inequality), ascending. May be empty.
std::vector<std::uint32_t> extract_cores(const HomophilyCoefficients& coeffs);

// Rank gap between the right edge of the HI figure and the rightmost
// above-curve point; n when no point is above the curve.
std::size_t residual_distance(const HiProfile& profile,
                              const HomophilyCoefficients& coeffs);

// (t, r_t) pairs for contiguous t, plus detected jump powers.
struct ResidualTrajectory {
  std::vector<std::int64_t> t;
  std::vector<std::size_t> r;
  std::vector<std::int64_t> jumps;
};

std::size_t default_jump_threshold(std::size_t n);  // max(2, ceil(0.01 n))

// Powers where r_t - r_{t-1} >= threshold, reporting only the onset of
// each run of qualifying increases.
std::vector<std::int64_t> detect_jump_transitions(const ResidualTrajectory& traj,
                                                  std::size_t threshold);

// Geometric mean of d_in over the core set, in log space.
double geometric_mean_truncated(const DualDegreeState& state,
                                const HomophilyCoefficients& coeffs);

struct CoreSelection {
  std::int64_t t_star = 0;
  std::vector<std::uint32_t> core_ids;
  std::vector<std::pair<std::int64_t, double>> g_curve;  // feasible interval
};

// Smallest local maximum of g_t inside [first jump, second jump), or
// [first jump, t_max] when only one jump exists. Endpoint maxima count.
CoreSelection select_optimal_t(const DegreeTrajectory& trajectory,
                               const std::vector<std::int64_t>& jumps);

// Threshold by the sparsest member of c_max: all ids with
// eta_i >= min_{c_max} eta. The complement is the noise set.
std::vector<std::uint32_t> noise_boundary(const LocalDensityVector& densities,
                                          const std::vector<std::uint32_t>& c_max_ids);

// Table: CSV rank,node_id,d_out,d_in[,label]. Figure: SVG of both series
// against rank, in-degrees colorized by label when given.
void write_hi_table(const HiProfile& profile, const Labeling* labels,
                    const std::filesystem::path& path);
void write_hi_svg(const HiProfile& profile, const Labeling* labels,
                  const std::filesystem::path& path);
void emit_hi_figure(const HiProfile& profile, const Labeling* labels,
                    const std::filesystem::path& table_path,
                    const std::filesystem::path& svg_path);

struct HiTable {
  HiProfile profile;
  std::optional<Labeling> labels;
};

HiTable read_hi_table(const std::filesystem::path& path);

}  // namespace hcl
