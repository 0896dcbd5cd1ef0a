#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hcl/hi_analysis.hpp"
#include "hcl/knn_graph.hpp"
#include "hcl/labeling.hpp"
#include "hcl/point_set.hpp"
#include "hcl/propagation.hpp"
#include "hcl/similarity.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(HCL_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 512> buffer;
  while (fgets(buffer.data(), buffer.size(), pipe)) {
    result.output += buffer.data();
  }
  const int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("hcl_cli_" + tag)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Small but structured enough for the full pipeline: two dense blobs in
// light noise.
void write_mini_config(const fs::path& path, std::uint64_t seed = 404) {
  std::ofstream out(path);
  out << R"({
  "seed": )"
      << seed << R"(,
  "clusters": [
    {"center": [2.0, 2.0], "scale": 0.22, "count": 150},
    {"center": [7.0, 7.0], "scale": 0.45, "count": 120}
  ],
  "noise": {"count": 130, "box_min": [0.0, 0.0], "box_max": [9.0, 9.0]}
})";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen writes points and truth labels deterministically") {
  TempDir dir("gen");
  const fs::path config = dir.path() / "spec.json";
  write_mini_config(config);

  const auto first = run_cli("gen --config " + config.string() + " --out-dir " +
                             dir.path().string());
  CHECK(first.status == 0);
  CHECK(fs::exists(dir.path() / "points.txt"));
  CHECK(fs::exists(dir.path() / "truth_labels.txt"));

  const std::string points_once = slurp(dir.path() / "points.txt");

  // overwrite refused without --force
  const auto refused = run_cli("gen --config " + config.string() +
                               " --out-dir " + dir.path().string());
  CHECK(refused.status != 0);

  const auto forced = run_cli("--force gen --config " + config.string() +
                              " --out-dir " + dir.path().string());
  CHECK(forced.status == 0);
  CHECK(slurp(dir.path() / "points.txt") == points_once);
}

TEST_CASE("gen binary points re-read identically") {
  TempDir dir("genbin");
  const fs::path config = dir.path() / "spec.json";
  write_mini_config(config);
  const auto result = run_cli("gen --config " + config.string() + " --binary" +
                              " --out-dir " + dir.path().string());
  CHECK(result.status == 0);
  const hcl::PointSet points = hcl::read_points(dir.path() / "points.bin");
  CHECK(points.size() == 400);
  CHECK(points.dim() == 2);
}

TEST_CASE("eval prints 1.0 for identical label files") {
  TempDir dir("eval");
  hcl::Labeling labels;
  labels.label = {1, 1, 2, 2, 0, 3};
  hcl::write_labels(labels, dir.path() / "a.txt");
  hcl::write_labels(labels, dir.path() / "b.txt");
  const auto result =
      run_cli("eval --truth " + (dir.path() / "a.txt").string() + " --pred " +
              (dir.path() / "b.txt").string());
  CHECK(result.status == 0);
  CHECK(result.output == "1.000000\n");
}

TEST_CASE("eval fails cleanly on a missing file") {
  const auto result = run_cli("eval --truth /nonexistent/a.txt --pred /nonexistent/b.txt");
  CHECK(result.status == 1);
}

TEST_CASE("unknown flags are rejected") {
  const auto result = run_cli("cluster --nonsense 3");
  CHECK(result.status != 0);
}

TEST_CASE("graph export matches an in-process build") {
  TempDir dir("graph");
  const fs::path config = dir.path() / "spec.json";
  write_mini_config(config);
  REQUIRE(run_cli("gen --config " + config.string() + " --out-dir " +
                  dir.path().string()).status == 0);
  const auto result =
      run_cli("graph --points " + (dir.path() / "points.txt").string() +
              " --k 6 --sigma 0.8 --out-dir " + dir.path().string());
  CHECK(result.status == 0);

  const hcl::PointSet points = hcl::read_points(dir.path() / "points.txt");
  const auto graph =
      hcl::build_knn_digraph(points, 6, hcl::SimilarityMeasure::gaussian(0.8));
  std::ifstream in(dir.path() / "graph.txt");
  std::size_t edges = 0;
  std::uint32_t src, dst;
  double w;
  bool all_match = true;
  while (in >> src >> dst >> w) {
    ++edges;
    if (graph.matrix().entry(src, dst) != w) all_match = false;
  }
  CHECK(all_match);
  CHECK(edges == graph.matrix().nnz());
}

TEST_CASE("degrees trajectory has the advertised schema") {
  TempDir dir("degrees");
  const fs::path config = dir.path() / "spec.json";
  write_mini_config(config);
  REQUIRE(run_cli("gen --config " + config.string() + " --out-dir " +
                  dir.path().string()).status == 0);
  const auto result =
      run_cli("degrees --points " + (dir.path() / "points.txt").string() +
              " --k 6 --tmax 5 --out-dir " + dir.path().string());
  CHECK(result.status == 0);
  std::ifstream in(dir.path() / "trajectory.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,node_id,d_in,d_out");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 5 * 400);
}

TEST_CASE("hi table round-trips through the CLI") {
  TempDir dir("hi");
  const fs::path config = dir.path() / "spec.json";
  write_mini_config(config);
  REQUIRE(run_cli("gen --config " + config.string() + " --out-dir " +
                  dir.path().string()).status == 0);
  const auto result =
      run_cli("hi --points " + (dir.path() / "points.txt").string() +
              " --k 6 --sigma 0.8 --t 4 --labels " +
              (dir.path() / "truth_labels.txt").string() + " --out-dir " +
              dir.path().string());
  CHECK(result.status == 0);
  CHECK(fs::exists(dir.path() / "hi_figure.svg"));

  const hcl::PointSet points = hcl::read_points(dir.path() / "points.txt");
  const auto graph =
      hcl::build_knn_digraph(points, 6, hcl::SimilarityMeasure::gaussian(0.8));
  const auto profile = hcl::hi_profile(hcl::propagate(graph.matrix(), 4));
  const auto table = hcl::read_hi_table(dir.path() / "hi_table.csv");
  CHECK(table.profile.perm == profile.perm);
  CHECK(table.profile.sorted_out == profile.sorted_out);
  CHECK(table.profile.permuted_in == profile.permuted_in);
  REQUIRE(table.labels.has_value());
  CHECK(table.labels->label == hcl::read_labels(dir.path() / "truth_labels.txt").label);
}

TEST_CASE("cluster pipeline end to end with byte-identical reruns") {
  TempDir dir("cluster");
  const fs::path config = dir.path() / "spec.json";
  write_mini_config(config);
  REQUIRE(run_cli("gen --config " + config.string() + " --out-dir " +
                  dir.path().string()).status == 0);

  const std::string cluster_args =
      "cluster --points " + (dir.path() / "points.txt").string() +
      " --k 10 --kc 5 --tmax 300 --out-dir " + dir.path().string();
  const auto result = run_cli(cluster_args);
  CHECK(result.status == 0);
  for (const char* name :
       {"labels.txt", "diagnostics.json", "hi_table.csv", "hi_figure.svg"}) {
    CHECK(fs::exists(dir.path() / name));
  }

  const std::string labels_once = slurp(dir.path() / "labels.txt");
  const std::string diag_once = slurp(dir.path() / "diagnostics.json");
  const std::string svg_once = slurp(dir.path() / "hi_figure.svg");
  const auto rerun = run_cli("--force " + cluster_args);
  CHECK(rerun.status == 0);
  CHECK(slurp(dir.path() / "labels.txt") == labels_once);
  CHECK(slurp(dir.path() / "diagnostics.json") == diag_once);
  CHECK(slurp(dir.path() / "hi_figure.svg") == svg_once);

  // evaluation against the generated truth is strong on this easy set
  const auto eval = run_cli("eval --truth " +
                            (dir.path() / "truth_labels.txt").string() +
                            " --pred " + (dir.path() / "labels.txt").string());
  CHECK(eval.status == 0);
  CHECK(std::stod(eval.output) >= 0.85);

  // cores agrees with cluster diagnostics on the selected power
  const auto cores = run_cli("cores --points " +
                             (dir.path() / "points.txt").string() +
                             " --k 10 --tmax 300 --out-dir " + dir.path().string());
  CHECK(cores.status == 0);
  const nlohmann::json cores_json =
      nlohmann::json::parse(slurp(dir.path() / "cores.json"));
  const nlohmann::json diag_json = nlohmann::json::parse(diag_once);
  CHECK(cores_json.at("t_star") == diag_json.at("t_star"));
  CHECK(cores_json.at("jumps") == diag_json.at("jumps"));
  CHECK(cores_json.at("cores").size() >= diag_json.at("cores").size());
}

TEST_CASE("failed cluster run leaves no partial outputs") {
  TempDir dir("fail");
  const fs::path config = dir.path() / "spec.json";
  write_mini_config(config);
  REQUIRE(run_cli("gen --config " + config.string() + " --out-dir " +
                  dir.path().string()).status == 0);
  // clobber guard: labels.txt already exists, so nothing new may appear
  { std::ofstream(dir.path() / "labels.txt") << "sentinel\n"; }
  const auto result =
      run_cli("cluster --points " + (dir.path() / "points.txt").string() +
              " --k 10 --kc 5 --tmax 300 --out-dir " + dir.path().string());
  CHECK(result.status != 0);
  CHECK(slurp(dir.path() / "labels.txt") == "sentinel\n");
  CHECK_FALSE(fs::exists(dir.path() / "diagnostics.json"));
  CHECK_FALSE(fs::exists(dir.path() / "hi_table.csv"));
}

}  // TEST_SUITE
