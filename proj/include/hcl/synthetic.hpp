#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "hcl/labeling.hpp"
#include "hcl/point_set.hpp"

namespace hcl {

// Isotropic Gaussian blob: `count` points at `center` with per-axis
// standard deviation `scale`. Nested structures come from overlapping
// blob specs.
struct BlobSpec {
  std::vector<double> center;
  double scale = 1.0;
  std::size_t count = 0;
};

struct Box {
  std::vector<double> min;
  std::vector<double> max;
};

struct SyntheticSpec {
  std::vector<BlobSpec> clusters;
  std::size_t noise_count = 0;
  Box noise_box;  // must contain every cluster center
  std::uint64_t seed = 0;
};

// Deterministic given the seed; own RNG stream, no std distributions.
// Points arrive blob by blob (labels 1..c) followed by uniform box noise
// (label 0).
std::pair<PointSet, Labeling> generate_toy(const SyntheticSpec& spec);

// JSON: {"seed":., "clusters":[{"center":[..],"scale":.,"count":.}],
//        "noise":{"count":., "box_min":[..], "box_max":[..]}}
SyntheticSpec read_synthetic_spec(const std::filesystem::path& path);

}  // namespace hcl
