#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace hcl {

// Immutable n x d coordinate matrix, row-major. All coordinates finite.
class PointSet {
 public:
  PointSet(std::size_t n, std::size_t d, std::vector<double> data);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  std::span<const double> point(std::size_t i) const {
    return {data_.data() + i * d_, d_};
  }
  const std::vector<double>& raw() const { return data_; }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> data_;
};

// Text: one point per row, columns separated by whitespace, ',' or ';'.
// Lines starting with '#' are skipped. Binary: little-endian header of
// three 64-bit integers (magic, n, d) followed by n*d 64-bit floats.
// read_points sniffs the magic and accepts either encoding.
inline constexpr std::uint64_t kPointsMagic = 0x31305354504C4348ull;  // "HCLPTS01"

PointSet read_points(const std::filesystem::path& path);
void write_points_text(const PointSet& points, const std::filesystem::path& path);
void write_points_binary(const PointSet& points, const std::filesystem::path& path);

}  // namespace hcl
