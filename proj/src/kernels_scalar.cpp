#include "hcl/kernels.hpp"

namespace hcl::kernels {
namespace {

// Reference kernels. Strictly ascending-index summation; SIMD variants
// are checked against these.

double l2sq_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

double gather_dot_scalar(const double* vals, const std::uint32_t* idx,
                         const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += vals[i] * x[idx[i]];
  }
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static constexpr Ops ops{&l2sq_scalar, &dot_scalar, &gather_dot_scalar,
                           "scalar"};
  return ops;
}

}  // namespace hcl::kernels
