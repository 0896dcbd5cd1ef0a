#include "hcl/labeling.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "hcl/errors.hpp"

namespace hcl {

Labeling read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open label file: " + path.string());
  }
  Labeling labels;
  std::string line;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::size_t index;
    std::uint32_t label;
    if (!(row >> index >> label)) {
      throw IoError("malformed label row: " + line);
    }
    if (index != expected) {
      throw IoError("label indices must be 0..n-1 in order");
    }
    labels.label.push_back(label);
    ++expected;
  }
  if (labels.label.empty()) {
    throw IoError("no labels in " + path.string());
  }
  return labels;
}

void write_labels(const Labeling& labels, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write label file: " + path.string());
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << i << ' ' << labels.label[i] << '\n';
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace hcl
