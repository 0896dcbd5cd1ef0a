#include "hcl/kernels.hpp"

#if defined(HCL_HAVE_NEON) && defined(__aarch64__)

#include <arm_neon.h>

namespace hcl::kernels {
namespace {

double l2sq_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) {
    sum += a[i] * b[i];
  }
  return sum;
}

double gather_dot_neon(const double* vals, const std::uint32_t* idx,
                       const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gathered =
        vcombine_f64(vld1_f64(x + idx[i]), vld1_f64(x + idx[i + 1]));
    acc = vfmaq_f64(acc, vld1q_f64(vals + i), gathered);
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) {
    sum += vals[i] * x[idx[i]];
  }
  return sum;
}

}  // namespace

const Ops* neon_ops() {
  static constexpr Ops ops{&l2sq_neon, &dot_neon, &gather_dot_neon, "neon"};
  return &ops;
}

}  // namespace hcl::kernels

#endif  // HCL_HAVE_NEON && __aarch64__
