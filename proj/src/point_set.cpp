#include "hcl/point_set.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "hcl/errors.hpp"

namespace hcl {

PointSet::PointSet(std::size_t n, std::size_t d, std::vector<double> data)
    : n_(n), d_(d), data_(std::move(data)) {
  if (n_ < 1 || d_ < 1) {
    throw InvalidInput("point set requires n >= 1 and d >= 1");
  }
  if (data_.size() != n_ * d_) {
    throw InvalidInput("point data size does not match n*d");
  }
  for (const double v : data_) {
    if (!std::isfinite(v)) {
      throw InvalidInput("point coordinates must be finite");
    }
  }
}

namespace {

void store_le64(std::uint64_t v, char* out) {
  for (int i = 0; i < 8; ++i) {
    out[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  }
}

std::uint64_t load_le64(const char* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  }
  return v;
}

PointSet read_points_binary(std::ifstream& in, const std::filesystem::path& path) {
  char header[16];
  if (!in.read(header, 16)) {
    throw IoError("truncated binary point header: " + path.string());
  }
  const std::uint64_t n = load_le64(header);
  const std::uint64_t d = load_le64(header + 8);
  if (n == 0 || d == 0 || n > (1ull << 32) || d > (1ull << 24)) {
    throw IoError("implausible binary point header: " + path.string());
  }
  std::vector<double> data(n * d);
  std::vector<char> buf(n * d * 8);
  if (!in.read(buf.data(), static_cast<std::streamsize>(buf.size()))) {
    throw IoError("truncated binary point payload: " + path.string());
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<double>(load_le64(buf.data() + 8 * i));
  }
  return PointSet(n, d, std::move(data));
}

PointSet read_points_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open point file: " + path.string());
  }
  std::vector<double> data;
  std::size_t n = 0;
  std::size_t d = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream row(line);
    std::vector<double> values;
    std::string tok;
    while (row >> tok) {
      if (tok[0] == '#') break;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw IoError("bad numeric field '" + tok + "' at line " +
                      std::to_string(line_no) + " of " + path.string());
      }
      if (used != tok.size()) {
        throw IoError("bad numeric field '" + tok + "' at line " +
                      std::to_string(line_no) + " of " + path.string());
      }
      values.push_back(v);
    }
    if (values.empty()) continue;
    if (d == 0) {
      d = values.size();
    } else if (values.size() != d) {
      throw IoError("inconsistent column count at line " + std::to_string(line_no) +
                    " of " + path.string());
    }
    data.insert(data.end(), values.begin(), values.end());
    ++n;
  }
  if (n == 0) {
    throw IoError("no points in " + path.string());
  }
  return PointSet(n, d, std::move(data));
}

}  // namespace

PointSet read_points(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open point file: " + path.string());
  }
  char magic[8];
  if (in.read(magic, 8) && load_le64(magic) == kPointsMagic) {
    return read_points_binary(in, path);
  }
  return read_points_text(path);
}

void write_points_text(const PointSet& points, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write point file: " + path.string());
  }
  char buf[32];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    for (std::size_t j = 0; j < p.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[j]);
      if (j) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

void write_points_binary(const PointSet& points, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write point file: " + path.string());
  }
  char word[8];
  store_le64(kPointsMagic, word);
  out.write(word, 8);
  store_le64(points.size(), word);
  out.write(word, 8);
  store_le64(points.dim(), word);
  out.write(word, 8);
  for (const double v : points.raw()) {
    store_le64(std::bit_cast<std::uint64_t>(v), word);
    out.write(word, 8);
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace hcl
