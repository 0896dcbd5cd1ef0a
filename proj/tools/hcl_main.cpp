// Command-line frontend: each pipeline stage as a subcommand with
// file-based inputs and outputs. Reruns with identical inputs and flags
// are byte-identical; outputs refuse to clobber existing files unless
// --force is given, and failed runs leave no partial files behind.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcl/clustering.hpp"
#include "hcl/errors.hpp"
#include "hcl/hi_analysis.hpp"
#include "hcl/kernels.hpp"
#include "hcl/knn_graph.hpp"
#include "hcl/labeling.hpp"
#include "hcl/nmi.hpp"
#include "hcl/point_set.hpp"
#include "hcl/propagation.hpp"
#include "hcl/similarity.hpp"
#include "hcl/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Deferred output set: every path is checked up front, content is written
// to a temporary sibling and renamed once complete.
class OutputSet {
 public:
  explicit OutputSet(bool force) : force_(force) {}

  void add(fs::path path, std::function<void(const fs::path&)> writer) {
    entries_.emplace_back(std::move(path), std::move(writer));
  }

  void commit() {
    for (const auto& [path, writer] : entries_) {
      if (!force_ && fs::exists(path)) {
        throw hcl::IoError("refusing to overwrite " + path.string() +
                           " (use --force)");
      }
    }
    for (const auto& [path, writer] : entries_) {
      if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
      }
      const fs::path tmp = path.string() + ".tmp";
      try {
        writer(tmp);
        fs::rename(tmp, path);
      } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
      }
    }
  }

 private:
  bool force_;
  std::vector<std::pair<fs::path, std::function<void(const fs::path&)>>> entries_;
};

struct GraphOpts {
  std::string points_path;
  std::size_t k = 10;
  std::string measure = "gaussian";
  double sigma = 0.0;  // 0: self-tuned median kNN distance
};

void add_graph_opts(CLI::App* cmd, GraphOpts& opts) {
  cmd->add_option("--points", opts.points_path, "Point file (text or binary)")
      ->required();
  cmd->add_option("--k", opts.k, "Neighbors per node")->check(CLI::PositiveNumber);
  cmd->add_option("--measure", opts.measure, "Similarity measure")
      ->check(CLI::IsMember({"gaussian", "cosine"}));
  cmd->add_option("--sigma", opts.sigma,
                  "Gaussian width (default: median kNN distance)");
}

struct LoadedGraphInput {
  hcl::PointSet points;
  hcl::SimilarityMeasure measure;
};

LoadedGraphInput load_graph_input(const GraphOpts& opts) {
  hcl::PointSet points = hcl::read_points(opts.points_path);
  hcl::SimilarityMeasure measure;
  if (opts.measure == "cosine") {
    measure = hcl::SimilarityMeasure::cosine();
  } else {
    const double sigma = opts.sigma > 0.0
                             ? opts.sigma
                             : hcl::estimate_sigma(points, opts.k);
    measure = hcl::SimilarityMeasure::gaussian(sigma);
  }
  return {std::move(points), measure};
}

json residual_json(const hcl::ResidualTrajectory& residual) {
  json arr = json::array();
  for (std::size_t p = 0; p < residual.t.size(); ++p) {
    arr.push_back({{"t", residual.t[p]}, {"r", residual.r[p]}});
  }
  return arr;
}

json g_curve_json(const std::vector<std::pair<std::int64_t, double>>& curve) {
  json arr = json::array();
  for (const auto& [t, g] : curve) {
    if (std::isnan(g)) {
      arr.push_back({{"t", t}, {"g", nullptr}});
    } else {
      arr.push_back({{"t", t}, {"g", g}});
    }
  }
  return arr;
}

json diagnostics_json(const hcl::PipelineDiagnostics& diag) {
  json j;
  j["n"] = diag.n;
  j["k"] = diag.k;
  j["k_c"] = diag.k_c;
  j["sigma"] = diag.sigma;
  j["measure"] = diag.measure;
  j["kernel"] = diag.kernel;
  j["t_max"] = diag.t_max;
  j["t_end"] = diag.t_end;
  j["jump_threshold"] = diag.jump_threshold;
  j["jumps"] = diag.jumps;
  j["first_jump"] = diag.first_jump;
  j["t_star"] = diag.t_star;
  j["residual"] = residual_json(diag.residual);
  j["g_curve"] = g_curve_json(diag.g_curve);
  j["c_max"] = diag.c_max;
  j["c_cluster_size"] = diag.c_cluster.size();
  j["c_cluster"] = diag.c_cluster;
  j["cores"] = diag.cores;
  j["cluster_count"] = diag.cluster_count;
  return j;
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw hcl::IoError("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw hcl::IoError("write failed: " + path.string());
  }
}

int run_gen(const std::string& config_path, const fs::path& out_dir,
            std::optional<std::uint64_t> seed, bool binary, bool force) {
  hcl::SyntheticSpec spec = hcl::read_synthetic_spec(config_path);
  if (seed) spec.seed = *seed;
  auto [points, labels] = hcl::generate_toy(spec);

  OutputSet outputs(force);
  const fs::path points_path = out_dir / (binary ? "points.bin" : "points.txt");
  if (binary) {
    outputs.add(points_path,
                [&](const fs::path& p) { hcl::write_points_binary(points, p); });
  } else {
    outputs.add(points_path,
                [&](const fs::path& p) { hcl::write_points_text(points, p); });
  }
  outputs.add(out_dir / "truth_labels.txt",
              [&](const fs::path& p) { hcl::write_labels(labels, p); });
  outputs.commit();
  std::cout << "generated " << points.size() << " points (dim " << points.dim()
            << ", seed " << spec.seed << ") in " << out_dir.string() << "\n";
  return 0;
}

int run_graph(const GraphOpts& opts, const fs::path& out_dir, bool force) {
  const LoadedGraphInput input = load_graph_input(opts);
  const hcl::DirectedKnnGraph graph =
      hcl::build_knn_digraph(input.points, opts.k, input.measure);
  OutputSet outputs(force);
  outputs.add(out_dir / "graph.txt", [&](const fs::path& p) {
    hcl::write_edge_list(graph.matrix(), p);
  });
  outputs.commit();
  std::cout << "graph: " << graph.size() << " nodes, "
            << graph.matrix().nnz() << " edges\n";
  return 0;
}

int run_degrees(const GraphOpts& opts, std::int64_t t_max,
                const fs::path& out_dir, bool force) {
  const LoadedGraphInput input = load_graph_input(opts);
  const hcl::DirectedKnnGraph graph =
      hcl::build_knn_digraph(input.points, opts.k, input.measure);
  const hcl::DegreeTrajectory traj =
      hcl::propagate_trajectory(graph.matrix(), t_max);
  OutputSet outputs(force);
  outputs.add(out_dir / "trajectory.csv", [&](const fs::path& p) {
    hcl::write_trajectory_csv(traj, p);
  });
  outputs.commit();
  std::cout << "trajectory: t = 1.." << t_max << " over " << graph.size()
            << " nodes\n";
  return 0;
}

int run_hi(const GraphOpts& opts, std::int64_t t, const std::string& labels_path,
           const fs::path& out_dir, bool force) {
  const LoadedGraphInput input = load_graph_input(opts);
  const hcl::DirectedKnnGraph graph =
      hcl::build_knn_digraph(input.points, opts.k, input.measure);
  const hcl::DualDegreeState state = hcl::propagate(graph.matrix(), t);
  const hcl::HiProfile profile = hcl::hi_profile(state);
  std::optional<hcl::Labeling> labels;
  if (!labels_path.empty()) {
    labels = hcl::read_labels(labels_path);
    if (labels->size() != input.points.size()) {
      throw hcl::InvalidInput("label file does not match point count");
    }
  }
  OutputSet outputs(force);
  const hcl::Labeling* label_ptr = labels ? &*labels : nullptr;
  outputs.add(out_dir / "hi_table.csv", [&](const fs::path& p) {
    hcl::write_hi_table(profile, label_ptr, p);
  });
  outputs.add(out_dir / "hi_figure.svg", [&](const fs::path& p) {
    hcl::write_hi_svg(profile, label_ptr, p);
  });
  outputs.commit();
  std::cout << "HI profile at t = " << t << " written to " << out_dir.string()
            << "\n";
  return 0;
}

int run_cores(const GraphOpts& opts, std::int64_t t_max,
              std::optional<std::size_t> jump_threshold, const fs::path& out_dir,
              bool force) {
  const LoadedGraphInput input = load_graph_input(opts);
  const hcl::DirectedKnnGraph graph =
      hcl::build_knn_digraph(input.points, opts.k, input.measure);
  const hcl::LocalDensityVector density = hcl::local_density(graph);

  // Incremental stepping so that hitting the underflow guard just ends
  // the sweep instead of discarding it.
  hcl::DegreeTrajectory traj;
  {
    hcl::DualDegreeState state;
    state.d_in.assign(graph.size(), 1.0);
    state.d_out.assign(graph.size(), 1.0);
    for (std::int64_t t = 1; t <= t_max; ++t) {
      try {
        state = hcl::dual_degree_step(graph.matrix(), state);
      } catch (const hcl::InvalidState&) {
        break;
      }
      traj.states.push_back(state);
    }
  }

  hcl::ResidualTrajectory residual;
  for (const hcl::DualDegreeState& state : traj.states) {
    const hcl::HomophilyCoefficients coeffs = hcl::homophilic_coefficients(state);
    residual.t.push_back(state.t);
    residual.r.push_back(
        hcl::residual_distance(hcl::hi_profile(state), coeffs));
  }
  const std::size_t threshold = jump_threshold
                                    ? *jump_threshold
                                    : hcl::default_jump_threshold(graph.size());
  const std::vector<std::int64_t> jumps =
      hcl::detect_jump_transitions(residual, threshold);
  const hcl::CoreSelection selection = hcl::select_optimal_t(traj, jumps);
  const hcl::DualDegreeState& state_first =
      traj.states[static_cast<std::size_t>(jumps.front() - 1)];
  const std::vector<std::uint32_t> c_max =
      hcl::extract_cores(hcl::homophilic_coefficients(state_first));
  const std::vector<std::uint32_t> c_cluster =
      hcl::noise_boundary(density, c_max);

  json j;
  j["n"] = graph.size();
  j["k"] = opts.k;
  j["sigma"] = input.measure.sigma;
  j["measure"] = opts.measure;
  j["kernel"] = hcl::kernels::active().name;
  j["t_max"] = t_max;
  j["t_end"] = traj.states.empty() ? 0 : traj.states.back().t;
  j["jump_threshold"] = threshold;
  j["jumps"] = jumps;
  j["t_star"] = selection.t_star;
  j["residual"] = residual_json(residual);
  j["g_curve"] = g_curve_json(selection.g_curve);
  j["c_max"] = c_max;
  j["c_cluster_size"] = c_cluster.size();
  j["cores"] = selection.core_ids;

  OutputSet outputs(force);
  outputs.add(out_dir / "cores.json",
              [&](const fs::path& p) { write_json(j, p); });
  outputs.commit();
  std::cout << "t_star = " << selection.t_star << ", |cores| = "
            << selection.core_ids.size() << ", jumps at ";
  for (std::size_t p = 0; p < jumps.size(); ++p) {
    std::cout << (p ? "," : "") << jumps[p];
  }
  std::cout << "\n";
  return 0;
}

int run_cluster(const GraphOpts& opts, int k_c, std::int64_t t_max,
                std::optional<std::size_t> target_c,
                std::optional<std::size_t> jump_threshold,
                const fs::path& out_dir, bool force) {
  const LoadedGraphInput input = load_graph_input(opts);
  hcl::PipelineConfig config;
  config.k = opts.k;
  config.k_c = k_c;
  config.measure = input.measure;
  config.t_max = t_max;
  config.target_c = target_c;
  config.jump_threshold = jump_threshold;

  const hcl::PipelineResult result = hcl::homophilic_clustering(input.points, config);
  const hcl::HiProfile profile = hcl::hi_profile(result.state_star);

  OutputSet outputs(force);
  outputs.add(out_dir / "labels.txt", [&](const fs::path& p) {
    hcl::write_labels(result.labels, p);
  });
  outputs.add(out_dir / "diagnostics.json", [&](const fs::path& p) {
    write_json(diagnostics_json(result.diagnostics), p);
  });
  outputs.add(out_dir / "hi_table.csv", [&](const fs::path& p) {
    hcl::write_hi_table(profile, &result.labels, p);
  });
  outputs.add(out_dir / "hi_figure.svg", [&](const fs::path& p) {
    hcl::write_hi_svg(profile, &result.labels, p);
  });
  outputs.commit();
  std::cout << "clusters: " << result.diagnostics.cluster_count
            << ", t_star = " << result.diagnostics.t_star << ", |C_cluster| = "
            << result.diagnostics.c_cluster.size() << "\n";
  return 0;
}

int run_eval(const std::string& truth_path, const std::string& pred_path,
             bool include_noise) {
  const hcl::Labeling truth = hcl::read_labels(truth_path);
  const hcl::Labeling pred = hcl::read_labels(pred_path);
  const double value = hcl::nmi(truth, pred, include_noise);
  std::printf("%.6f\n", value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homophilic clustering of noisy point clouds"};
  app.require_subcommand(1);

  bool force = false;
  app.add_flag("--force", force, "Overwrite existing output files");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  std::string gen_config;
  std::string gen_out = ".";
  std::optional<std::uint64_t> gen_seed;
  bool gen_binary = false;
  gen->add_option("--config", gen_config, "Synthetic spec (JSON)")->required();
  gen->add_option("--out-dir", gen_out, "Output directory");
  gen->add_option("--seed", gen_seed, "Override the spec seed");
  gen->add_flag("--binary", gen_binary, "Write binary points");

  // graph
  auto* graph_cmd = app.add_subcommand("graph", "Build and export the kNN digraph");
  GraphOpts graph_opts;
  std::string graph_out = ".";
  add_graph_opts(graph_cmd, graph_opts);
  graph_cmd->add_option("--out-dir", graph_out, "Output directory");

  // degrees
  auto* degrees_cmd =
      app.add_subcommand("degrees", "Export the dual-degree trajectory");
  GraphOpts degrees_opts;
  std::int64_t degrees_tmax = 50;
  std::string degrees_out = ".";
  add_graph_opts(degrees_cmd, degrees_opts);
  degrees_cmd->add_option("--tmax", degrees_tmax, "Largest power")
      ->check(CLI::PositiveNumber);
  degrees_cmd->add_option("--out-dir", degrees_out, "Output directory");

  // hi
  auto* hi_cmd = app.add_subcommand("hi", "Emit the HI table and figure");
  GraphOpts hi_opts;
  std::int64_t hi_t = 1;
  std::string hi_labels;
  std::string hi_out = ".";
  add_graph_opts(hi_cmd, hi_opts);
  hi_cmd->add_option("--t", hi_t, "Degree order")->check(CLI::PositiveNumber);
  hi_cmd->add_option("--labels", hi_labels, "Label file for colorizing");
  hi_cmd->add_option("--out-dir", hi_out, "Output directory");

  // cores
  auto* cores_cmd =
      app.add_subcommand("cores", "Detect jumps, optimal power and cores");
  GraphOpts cores_opts;
  std::int64_t cores_tmax = 200;
  std::optional<std::size_t> cores_jump;
  std::string cores_out = ".";
  add_graph_opts(cores_cmd, cores_opts);
  cores_cmd->add_option("--tmax", cores_tmax, "Largest power")
      ->check(CLI::PositiveNumber);
  cores_cmd->add_option("--jump-threshold", cores_jump,
                        "Residual jump threshold (default max(2, 1% of n))");
  cores_cmd->add_option("--out-dir", cores_out, "Output directory");

  // cluster
  auto* cluster_cmd = app.add_subcommand("cluster", "Run the full pipeline");
  GraphOpts cluster_opts;
  int cluster_kc = 5;
  std::int64_t cluster_tmax = 200;
  std::optional<std::size_t> cluster_target;
  std::optional<std::size_t> cluster_jump;
  std::string cluster_out = ".";
  add_graph_opts(cluster_cmd, cluster_opts);
  cluster_cmd->add_option("--kc", cluster_kc, "Core-merge neighborhood size")
      ->check(CLI::Range(1, 5));
  cluster_cmd->add_option("--tmax", cluster_tmax, "Largest power")
      ->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--clusters", cluster_target,
                          "Stop merging at this cluster count");
  cluster_cmd->add_option("--jump-threshold", cluster_jump,
                          "Residual jump threshold (default max(2, 1% of n))");
  cluster_cmd->add_option("--out-dir", cluster_out, "Output directory");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "NMI between two label files");
  std::string eval_truth, eval_pred;
  bool eval_include_noise = false;
  eval_cmd->add_option("--truth", eval_truth, "Reference labels")->required();
  eval_cmd->add_option("--pred", eval_pred, "Predicted labels")->required();
  eval_cmd->add_flag("--include-noise", eval_include_noise,
                     "Keep noise-labeled points in the metric");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return run_gen(gen_config, gen_out, gen_seed, gen_binary, force);
    }
    if (graph_cmd->parsed()) {
      return run_graph(graph_opts, graph_out, force);
    }
    if (degrees_cmd->parsed()) {
      return run_degrees(degrees_opts, degrees_tmax, degrees_out, force);
    }
    if (hi_cmd->parsed()) {
      return run_hi(hi_opts, hi_t, hi_labels, hi_out, force);
    }
    if (cores_cmd->parsed()) {
      return run_cores(cores_opts, cores_tmax, cores_jump, cores_out, force);
    }
    if (cluster_cmd->parsed()) {
      return run_cluster(cluster_opts, cluster_kc, cluster_tmax, cluster_target,
                         cluster_jump, cluster_out, force);
    }
    if (eval_cmd->parsed()) {
      return run_eval(eval_truth, eval_pred, eval_include_noise);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
