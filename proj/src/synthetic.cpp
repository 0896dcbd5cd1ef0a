#include "hcl/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "hcl/errors.hpp"

namespace hcl {

namespace {

// Self-contained sampling on top of mt19937_64 so that streams are
// identical across standard libraries (std distributions are not pinned).
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Marsaglia polar method.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

void validate_spec(const SyntheticSpec& spec) {
  if (spec.clusters.empty()) {
    throw InvalidInput("synthetic spec needs at least one cluster");
  }
  const std::size_t d = spec.clusters.front().center.size();
  if (d == 0) {
    throw InvalidInput("cluster centers need at least one dimension");
  }
  for (const BlobSpec& blob : spec.clusters) {
    if (blob.center.size() != d) {
      throw InvalidInput("cluster centers disagree on dimension");
    }
    if (!(blob.scale > 0.0) || blob.count < 1) {
      throw InvalidInput("cluster needs scale > 0 and count >= 1");
    }
  }
  if (spec.noise_box.min.size() != d || spec.noise_box.max.size() != d) {
    throw InvalidInput("noise box dimension mismatch");
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (!(spec.noise_box.min[j] <= spec.noise_box.max[j])) {
      throw InvalidInput("noise box must satisfy min <= max");
    }
    for (const BlobSpec& blob : spec.clusters) {
      if (blob.center[j] < spec.noise_box.min[j] ||
          blob.center[j] > spec.noise_box.max[j]) {
        throw InvalidInput("noise box must contain every cluster center");
      }
    }
  }
}

}  // namespace

std::pair<PointSet, Labeling> generate_toy(const SyntheticSpec& spec) {
  validate_spec(spec);
  const std::size_t d = spec.clusters.front().center.size();
  std::size_t n = spec.noise_count;
  for (const BlobSpec& blob : spec.clusters) n += blob.count;

  SampleStream rng(spec.seed);
  std::vector<double> data;
  data.reserve(n * d);
  Labeling labels;
  labels.label.reserve(n);

  std::uint32_t cluster_id = 0;
  for (const BlobSpec& blob : spec.clusters) {
    ++cluster_id;
    for (std::size_t p = 0; p < blob.count; ++p) {
      for (std::size_t j = 0; j < d; ++j) {
        data.push_back(blob.center[j] + blob.scale * rng.normal());
      }
      labels.label.push_back(cluster_id);
    }
  }
  for (std::size_t p = 0; p < spec.noise_count; ++p) {
    for (std::size_t j = 0; j < d; ++j) {
      data.push_back(rng.uniform(spec.noise_box.min[j], spec.noise_box.max[j]));
    }
    labels.label.push_back(Labeling::kNoise);
  }
  return {PointSet(n, d, std::move(data)), std::move(labels)};
}

SyntheticSpec read_synthetic_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open synthetic spec: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad synthetic spec " + path.string() + ": " + e.what());
  }
  SyntheticSpec spec;
  try {
    spec.seed = j.value("seed", 0ull);
    for (const auto& c : j.at("clusters")) {
      BlobSpec blob;
      blob.center = c.at("center").get<std::vector<double>>();
      blob.scale = c.at("scale").get<double>();
      blob.count = c.at("count").get<std::size_t>();
      spec.clusters.push_back(std::move(blob));
    }
    if (j.contains("noise")) {
      const auto& noise = j.at("noise");
      spec.noise_count = noise.at("count").get<std::size_t>();
      spec.noise_box.min = noise.at("box_min").get<std::vector<double>>();
      spec.noise_box.max = noise.at("box_max").get<std::vector<double>>();
    } else {
      // No noise: box degenerates to the hull of the centers.
      spec.noise_box.min = spec.clusters.front().center;
      spec.noise_box.max = spec.clusters.front().center;
      for (const BlobSpec& blob : spec.clusters) {
        for (std::size_t k = 0; k < blob.center.size(); ++k) {
          spec.noise_box.min[k] = std::min(spec.noise_box.min[k], blob.center[k]);
          spec.noise_box.max[k] = std::max(spec.noise_box.max[k], blob.center[k]);
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad synthetic spec " + path.string() + ": " + e.what());
  }
  return spec;
}

}  // namespace hcl
