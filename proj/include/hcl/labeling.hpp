#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace hcl {

// Per-point assignment: cluster ids 1..c, 0 = noise.
struct Labeling {
  static constexpr std::uint32_t kNoise = 0;
  std::vector<std::uint32_t> label;

  std::size_t size() const { return label.size(); }
};

// One line per point: `point_index label`.
Labeling read_labels(const std::filesystem::path& path);
void write_labels(const Labeling& labels, const std::filesystem::path& path);

}  // namespace hcl
