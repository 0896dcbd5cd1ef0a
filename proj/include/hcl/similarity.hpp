#pragma once

#include <span>

#include "hcl/point_set.hpp"

namespace hcl {

enum class MeasureKind { gaussian_exponential, cosine };

// Pairwise similarity with codomain [0, 1]. Gaussian: exp(-dist^2/sigma^2)
// over Euclidean distance. Cosine: cosine of the angle, negatives clamped
// to 0 to keep the codomain.
struct SimilarityMeasure {
  MeasureKind kind = MeasureKind::gaussian_exponential;
  double sigma = 1.0;  // Gaussian width, > 0; ignored for cosine

  static SimilarityMeasure gaussian(double sigma);
  static SimilarityMeasure cosine();
};

void validate(const SimilarityMeasure& measure);

double similarity(std::span<const double> a, std::span<const double> b,
                  const SimilarityMeasure& measure);

// Distance inducing the neighbor ordering for the measure: Euclidean for
// Gaussian, angle in [0, pi] for cosine.
double neighbor_distance(std::span<const double> a, std::span<const double> b,
                         const SimilarityMeasure& measure);

// Self-tuning Gaussian width: median of all n*k exact kNN Euclidean
// distances. Falls back to 1.0 when the median is zero (all-duplicate
// degenerate input).
double estimate_sigma(const PointSet& points, std::size_t k);

}  // namespace hcl
