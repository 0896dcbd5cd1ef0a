#include "hcl/hi_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "hcl/errors.hpp"

namespace hcl {

HiProfile hi_profile(const DualDegreeState& state) {
  const std::size_t n = state.d_out.size();
  if (state.d_in.size() != n || n == 0) {
    throw InvalidInput("degree state is empty or inconsistent");
  }
  HiProfile profile;
  profile.t = state.t;
  profile.perm.resize(n);
  std::iota(profile.perm.begin(), profile.perm.end(), 0u);
  std::sort(profile.perm.begin(), profile.perm.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              return state.d_out[a] != state.d_out[b]
                         ? state.d_out[a] > state.d_out[b]
                         : a < b;
            });
  profile.sorted_out.resize(n);
  profile.permuted_in.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    profile.sorted_out[r] = state.d_out[profile.perm[r]];
    profile.permuted_in[r] = state.d_in[profile.perm[r]];
  }
  return profile;
}

HomophilyCoefficients homophilic_coefficients(const DualDegreeState& state) {
  HomophilyCoefficients coeffs;
  coeffs.hbar.resize(state.d_out.size());
  for (std::size_t i = 0; i < state.d_out.size(); ++i) {
    if (!(state.d_out[i] > 0.0) || !(state.d_in[i] > 0.0)) {
      throw InvalidState("homophilic coefficient needs positive dual degrees");
    }
    coeffs.hbar[i] = state.d_in[i] / state.d_out[i];
  }
  return coeffs;
}

std::vector<std::uint32_t> extract_cores(const HomophilyCoefficients& coeffs) {
  std::vector<std::uint32_t> cores;
  for (std::size_t i = 0; i < coeffs.hbar.size(); ++i) {
    if (coeffs.hbar[i] >= 1.0) {
      cores.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return cores;
}

std::size_t residual_distance(const HiProfile& profile,
                              const HomophilyCoefficients& coeffs) {
  const std::size_t n = profile.perm.size();
  if (coeffs.hbar.size() != n) {
    throw InvalidInput("profile and coefficients disagree on n");
  }
  for (std::size_t r = n; r-- > 0;) {
    if (coeffs.hbar[profile.perm[r]] >= 1.0) {
      return n - 1 - r;
    }
  }
  return n;  // nothing above the out-degree curve
}

std::size_t default_jump_threshold(std::size_t n) {
  return std::max<std::size_t>(
      2, static_cast<std::size_t>(
             std::ceil(0.01 * static_cast<double>(n))));
}

std::vector<std::int64_t> detect_jump_transitions(const ResidualTrajectory& traj,
                                                  std::size_t threshold) {
  if (traj.t.size() != traj.r.size()) {
    throw InvalidInput("residual trajectory arrays disagree in length");
  }
  for (std::size_t p = 1; p < traj.t.size(); ++p) {
    if (traj.t[p] != traj.t[p - 1] + 1) {
      throw InvalidInput("residual trajectory must cover contiguous powers");
    }
  }
  std::vector<std::int64_t> jumps;
  if (traj.t.size() < 2) return jumps;
  bool prev_qualifies = false;
  for (std::size_t p = 1; p < traj.t.size(); ++p) {
    const bool qualifies =
        traj.r[p] >= traj.r[p - 1] &&
        traj.r[p] - traj.r[p - 1] >= threshold;
    // Only the onset of a run of qualifying increases is a jump.
    if (qualifies && !prev_qualifies) {
      jumps.push_back(traj.t[p]);
    }
    prev_qualifies = qualifies;
  }
  return jumps;
}

double geometric_mean_truncated(const DualDegreeState& state,
                                const HomophilyCoefficients& coeffs) {
  if (coeffs.hbar.size() != state.d_in.size()) {
    throw InvalidInput("state and coefficients disagree on n");
  }
  double log_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < coeffs.hbar.size(); ++i) {
    if (coeffs.hbar[i] >= 1.0) {
      log_sum += std::log(state.d_in[i]);
      ++count;
    }
  }
  if (count == 0) {
    throw InvalidState("geometric mean undefined: empty core set");
  }
  return std::exp(log_sum / static_cast<double>(count));
}

CoreSelection select_optimal_t(const DegreeTrajectory& trajectory,
                               const std::vector<std::int64_t>& jumps) {
  if (jumps.empty()) {
    throw SelectionFailed(
        "no jump transition detected; increase t_max and rerun");
  }
  if (trajectory.states.empty()) {
    throw InvalidInput("empty trajectory");
  }
  const std::int64_t t_lo = jumps.front();
  const std::int64_t t_max = trajectory.states.back().t;
  // [first jump, second jump) when a second jump exists, else up to t_max.
  const std::int64_t t_hi = jumps.size() >= 2 ? jumps[1] - 1 : t_max;
  if (t_lo < trajectory.states.front().t || t_hi > t_max || t_lo > t_hi) {
    throw InvalidInput("trajectory does not cover the feasible interval");
  }

  const auto state_at = [&](std::int64_t t) -> const DualDegreeState& {
    const std::size_t index =
        static_cast<std::size_t>(t - trajectory.states.front().t);
    return trajectory.states[index];
  };

  CoreSelection selection;
  std::vector<double> g;  // NaN marks an empty core set at that power
  for (std::int64_t t = t_lo; t <= t_hi; ++t) {
    const DualDegreeState& state = state_at(t);
    const HomophilyCoefficients coeffs = homophilic_coefficients(state);
    double gt = std::numeric_limits<double>::quiet_NaN();
    bool has_core = false;
    for (const double h : coeffs.hbar) {
      if (h >= 1.0) {
        has_core = true;
        break;
      }
    }
    if (has_core) {
      gt = geometric_mean_truncated(state, coeffs);
    }
    g.push_back(gt);
    selection.g_curve.emplace_back(t, gt);
  }

  std::int64_t t_star = -1;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (std::isnan(g[p])) continue;
    const bool left_ok =
        p == 0 || std::isnan(g[p - 1]) || g[p] >= g[p - 1];
    const bool right_ok =
        p + 1 == g.size() || std::isnan(g[p + 1]) || g[p] >= g[p + 1];
    if (left_ok && right_ok) {
      t_star = t_lo + static_cast<std::int64_t>(p);
      break;
    }
  }
  if (t_star < 0) {
    throw SelectionFailed("no usable core set inside the feasible interval");
  }
  selection.t_star = t_star;
  selection.core_ids = extract_cores(homophilic_coefficients(state_at(t_star)));
  return selection;
}

std::vector<std::uint32_t> noise_boundary(const LocalDensityVector& densities,
                                          const std::vector<std::uint32_t>& c_max_ids) {
  if (c_max_ids.empty()) {
    throw InvalidInput("noise boundary requires a non-empty core set");
  }
  double threshold = HUGE_VAL;
  for (const std::uint32_t id : c_max_ids) {
    if (id >= densities.eta.size()) {
      throw InvalidInput("core id out of range");
    }
    threshold = std::min(threshold, densities.eta[id]);
  }
  std::vector<std::uint32_t> cluster_set;
  for (std::size_t i = 0; i < densities.eta.size(); ++i) {
    if (densities.eta[i] >= threshold) {
      cluster_set.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return cluster_set;
}

// ---------------------------------------------------------------------------
// HI table and figure emission

void write_hi_table(const HiProfile& profile, const Labeling* labels,
                    const std::filesystem::path& path) {
  const std::size_t n = profile.perm.size();
  if (labels && labels->size() != n) {
    throw InvalidInput("label vector does not match profile size");
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write HI table: " + path.string());
  }
  out << (labels ? "rank,node_id,d_out,d_in,label\n" : "rank,node_id,d_out,d_in\n");
  char out_buf[32], in_buf[32];
  for (std::size_t r = 0; r < n; ++r) {
    std::snprintf(out_buf, sizeof(out_buf), "%.17g", profile.sorted_out[r]);
    std::snprintf(in_buf, sizeof(in_buf), "%.17g", profile.permuted_in[r]);
    out << r << ',' << profile.perm[r] << ',' << out_buf << ',' << in_buf;
    if (labels) {
      out << ',' << labels->label[profile.perm[r]];
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

HiTable read_hi_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open HI table: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw IoError("empty HI table: " + path.string());
  }
  const bool labeled = line.find(",label") != std::string::npos;
  HiTable table;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> label_pairs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream row(line);
    std::size_t rank;
    std::uint32_t node;
    double d_out, d_in;
    if (!(row >> rank >> node >> d_out >> d_in)) {
      throw IoError("malformed HI table row: " + line);
    }
    if (rank != table.profile.perm.size()) {
      throw IoError("HI table ranks out of order");
    }
    table.profile.perm.push_back(node);
    table.profile.sorted_out.push_back(d_out);
    table.profile.permuted_in.push_back(d_in);
    if (labeled) {
      std::uint32_t label;
      if (!(row >> label)) {
        throw IoError("missing label in HI table row: " + line);
      }
      label_pairs.emplace_back(node, label);
    }
  }
  if (labeled) {
    Labeling labels;
    labels.label.resize(table.profile.perm.size(), Labeling::kNoise);
    for (const auto& [node, label] : label_pairs) {
      if (node >= labels.size()) {
        throw IoError("HI table node id out of range");
      }
      labels.label[node] = label;
    }
    table.labels = std::move(labels);
  }
  return table;
}

namespace {

// Qualitative palette; label 0 (noise) renders gray.
const char* label_color(std::uint32_t label) {
  static const char* colors[] = {"#c0c0c0", "#e41a1c", "#377eb8", "#4daf4a",
                                 "#984ea3", "#ff7f00", "#a65628", "#f781bf",
                                 "#17becf", "#bcbd22", "#66c2a5", "#fc8d62"};
  return colors[label % (sizeof(colors) / sizeof(colors[0]))];
}

struct Scale {
  double x0, x1, y0, y1;  // data range
  double px0, px1, py0, py1;  // pixel range (y flipped)
  double x(double v) const { return px0 + (v - x0) / (x1 - x0) * (px1 - px0); }
  double y(double v) const { return py0 - (v - y0) / (y1 - y0) * (py0 - py1); }
};

}  // namespace

void write_hi_svg(const HiProfile& profile, const Labeling* labels,
                  const std::filesystem::path& path) {
  const std::size_t n = profile.perm.size();
  if (labels && labels->size() != n) {
    throw InvalidInput("label vector does not match profile size");
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write HI figure: " + path.string());
  }

  double y_max = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    y_max = std::max({y_max, profile.sorted_out[r], profile.permuted_in[r]});
  }
  if (y_max <= 0.0) y_max = 1.0;

  const double width = 960, height = 600;
  Scale sc{0.0,
           static_cast<double>(n > 1 ? n - 1 : 1),
           0.0,
           y_max * 1.05,
           70.0,
           width - 20.0,
           height - 50.0,
           20.0};

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  out << "<line x1=\"" << sc.px0 << "\" y1=\"" << sc.py0 << "\" x2=\"" << sc.px1
      << "\" y2=\"" << sc.py0 << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << sc.px0 << "\" y1=\"" << sc.py0 << "\" x2=\"" << sc.px0
      << "\" y2=\"" << sc.py1 << "\" stroke=\"black\"/>\n";
  char buf[64];
  for (int tick = 0; tick <= 4; ++tick) {
    const double yv = sc.y1 * tick / 4.0;
    std::snprintf(buf, sizeof(buf), "%.3g", yv);
    out << "<text x=\"" << sc.px0 - 6 << "\" y=\"" << sc.y(yv) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << buf << "</text>\n";
    const double xv = sc.x0 + (sc.x1 - sc.x0) * tick / 4.0;
    std::snprintf(buf, sizeof(buf), "%.0f", xv);
    out << "<text x=\"" << sc.x(xv) << "\" y=\"" << sc.py0 + 18
        << "\" font-size=\"12\" text-anchor=\"middle\">" << buf << "</text>\n";
  }
  out << "<text x=\"" << (sc.px0 + sc.px1) / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">rank by descending out-degree</text>\n"
      << "<text x=\"16\" y=\"" << (sc.py0 + sc.py1) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (sc.py0 + sc.py1) / 2 << ")\">degree</text>\n"
      << "<text x=\"" << sc.px1 - 200 << "\" y=\"" << sc.py1 + 14
      << "\" font-size=\"12\">out-degree (line), in-degree (dots), t="
      << profile.t << "</text>\n";

  // in-degree dots, colorized by label when available
  for (std::size_t r = 0; r < n; ++r) {
    const char* color =
        labels ? label_color(labels->label[profile.perm[r]]) : "#377eb8";
    out << "<circle cx=\"" << sc.x(static_cast<double>(r)) << "\" cy=\""
        << sc.y(profile.permuted_in[r]) << "\" r=\"2\" fill=\"" << color
        << "\"/>\n";
  }

  // out-degree curve
  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" points=\"";
  for (std::size_t r = 0; r < n; ++r) {
    out << sc.x(static_cast<double>(r)) << ',' << sc.y(profile.sorted_out[r])
        << ' ';
  }
  out << "\"/>\n</svg>\n";
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

void emit_hi_figure(const HiProfile& profile, const Labeling* labels,
                    const std::filesystem::path& table_path,
                    const std::filesystem::path& svg_path) {
  write_hi_table(profile, labels, table_path);
  write_hi_svg(profile, labels, svg_path);
}

}  // namespace hcl
