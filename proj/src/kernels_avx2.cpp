#include "hcl/kernels.hpp"

#if defined(HCL_HAVE_AVX2)

#include <immintrin.h>

namespace hcl::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double l2sq_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    sum += a[i] * b[i];
  }
  return sum;
}

double gather_dot_avx2(const double* vals, const std::uint32_t* idx,
                       const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i idx4 =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    const __m256d gathered = _mm256_i32gather_pd(x, idx4, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + i), gathered, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    sum += vals[i] * x[idx[i]];
  }
  return sum;
}

}  // namespace

const Ops* avx2_ops() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) {
    return nullptr;
  }
  static constexpr Ops ops{&l2sq_avx2, &dot_avx2, &gather_dot_avx2, "avx2"};
  return &ops;
}

}  // namespace hcl::kernels

#endif  // HCL_HAVE_AVX2
