#include "hcl/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hcl/errors.hpp"
#include "hcl/kernels.hpp"

namespace hcl {

SimilarityMeasure SimilarityMeasure::gaussian(double sigma) {
  SimilarityMeasure m{MeasureKind::gaussian_exponential, sigma};
  validate(m);
  return m;
}

SimilarityMeasure SimilarityMeasure::cosine() {
  return {MeasureKind::cosine, 1.0};
}

void validate(const SimilarityMeasure& measure) {
  if (measure.kind == MeasureKind::gaussian_exponential &&
      !(measure.sigma > 0.0 && std::isfinite(measure.sigma))) {
    throw InvalidInput("gaussian similarity requires sigma > 0");
  }
}

namespace {

void check_dims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw InvalidInput("similarity arguments must share a nonzero dimension");
  }
}

// Cosine of the angle, clamped into [-1, 1]. Throws on zero vectors.
double cosine_raw(std::span<const double> a, std::span<const double> b) {
  const auto& ops = kernels::active();
  const double aa = ops.dot(a.data(), a.data(), a.size());
  const double bb = ops.dot(b.data(), b.data(), b.size());
  if (aa == 0.0 || bb == 0.0) {
    throw InvalidInput("cosine similarity undefined for the zero vector");
  }
  const double ab = ops.dot(a.data(), b.data(), a.size());
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

}  // namespace

double similarity(std::span<const double> a, std::span<const double> b,
                  const SimilarityMeasure& measure) {
  check_dims(a, b);
  validate(measure);
  if (measure.kind == MeasureKind::gaussian_exponential) {
    const double d2 = kernels::active().l2sq(a.data(), b.data(), a.size());
    return std::exp(-d2 / (measure.sigma * measure.sigma));
  }
  return std::max(0.0, cosine_raw(a, b));
}

double neighbor_distance(std::span<const double> a, std::span<const double> b,
                         const SimilarityMeasure& measure) {
  check_dims(a, b);
  validate(measure);
  if (measure.kind == MeasureKind::gaussian_exponential) {
    return std::sqrt(kernels::active().l2sq(a.data(), b.data(), a.size()));
  }
  return std::acos(cosine_raw(a, b));
}

double estimate_sigma(const PointSet& points, std::size_t k) {
  const std::size_t n = points.size();
  if (k < 1 || k >= n) {
    throw InvalidInput("sigma estimation requires 1 <= k < n");
  }
  const auto& ops = kernels::active();
  // k smallest off-diagonal distances per point, exhaustively.
  std::vector<double> all;
  all.reserve(n * k);
  std::vector<double> dists(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = points.point(i);
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto pj = points.point(j);
      dists[m++] = ops.l2sq(pi.data(), pj.data(), pi.size());
    }
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.begin() + m);
    for (std::size_t p = 0; p < k; ++p) {
      all.push_back(std::sqrt(dists[p]));
    }
  }
  std::sort(all.begin(), all.end());
  const std::size_t mid = all.size() / 2;
  const double median = (all.size() % 2 == 1)
                            ? all[mid]
                            : 0.5 * (all[mid - 1] + all[mid]);
  return median > 0.0 ? median : 1.0;
}

}  // namespace hcl
