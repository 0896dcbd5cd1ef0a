#include <doctest.h>

#include <random>
#include <vector>

#include "hcl/kernels.hpp"
#include "test_support.hpp"

using hcl::kernels::Ops;

namespace {

struct KernelGuard {
  const Ops& saved;
  KernelGuard() : saved(hcl::kernels::active()) {}
  ~KernelGuard() { hcl::kernels::set_active(saved); }
};

double l2sq_ref(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double dot_ref(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void check_variant_matches_scalar(const Ops& variant) {
  std::mt19937_64 rng(7);
  const Ops& scalar = hcl::kernels::scalar_ops();
  for (std::size_t len : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u,
                          31u, 64u, 65u, 257u}) {
    std::vector<double> a(len), b(len), x(std::max<std::size_t>(len, 1) + 40);
    std::vector<std::uint32_t> idx(len);
    for (double& v : a) v = test_support::uniform(rng, -2.0, 2.0);
    for (double& v : b) v = test_support::uniform(rng, -2.0, 2.0);
    for (double& v : x) v = test_support::uniform(rng, -2.0, 2.0);
    for (std::uint32_t& v : idx) {
      v = static_cast<std::uint32_t>(rng() % x.size());
    }
    const double s_l2 = scalar.l2sq(a.data(), b.data(), len);
    const double v_l2 = variant.l2sq(a.data(), b.data(), len);
    CHECK(v_l2 == doctest::Approx(s_l2).epsilon(1e-12));
    const double s_dot = scalar.dot(a.data(), b.data(), len);
    const double v_dot = variant.dot(a.data(), b.data(), len);
    CHECK(std::abs(v_dot - s_dot) <= 1e-12 * std::max(1.0, std::abs(s_dot)));
    const double s_g = scalar.gather_dot(a.data(), idx.data(), x.data(), len);
    const double v_g = variant.gather_dot(a.data(), idx.data(), x.data(), len);
    CHECK(std::abs(v_g - s_g) <= 1e-12 * std::max(1.0, std::abs(s_g)));
  }
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar reference values") {
  const Ops& ops = hcl::kernels::scalar_ops();
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{0.0, 2.0, 5.0};
  CHECK(ops.l2sq(a.data(), b.data(), 3) == 5.0);
  CHECK(ops.dot(a.data(), b.data(), 3) == 19.0);
  const std::vector<std::uint32_t> idx{2, 0, 0};
  // 1*b[2] + 2*b[0] + 3*b[0]
  CHECK(ops.gather_dot(a.data(), idx.data(), b.data(), 3) == 5.0);
  CHECK(ops.l2sq(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("scalar matches direct loops on random input") {
  std::mt19937_64 rng(11);
  const Ops& ops = hcl::kernels::scalar_ops();
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t len = 1 + rng() % 50;
    std::vector<double> a(len), b(len);
    for (double& v : a) v = test_support::uniform(rng, -3.0, 3.0);
    for (double& v : b) v = test_support::uniform(rng, -3.0, 3.0);
    CHECK(ops.l2sq(a.data(), b.data(), len) == l2sq_ref(a, b));
    CHECK(ops.dot(a.data(), b.data(), len) == dot_ref(a, b));
  }
}

TEST_CASE("avx2 variant equivalent to scalar") {
  const Ops* avx2 = hcl::kernels::avx2_ops();
  if (!avx2) return;  // host without AVX2
  check_variant_matches_scalar(*avx2);
}

TEST_CASE("neon variant equivalent to scalar") {
  const Ops* neon = hcl::kernels::neon_ops();
  if (!neon) return;
  check_variant_matches_scalar(*neon);
}

TEST_CASE("active table is overridable and restored") {
  KernelGuard guard;
  hcl::kernels::set_active(hcl::kernels::scalar_ops());
  CHECK(std::string(hcl::kernels::active().name) == "scalar");
  if (const Ops* avx2 = hcl::kernels::avx2_ops()) {
    hcl::kernels::set_active(*avx2);
    CHECK(std::string(hcl::kernels::active().name) == "avx2");
  }
}

TEST_CASE("gather_dot tolerates repeated and unsorted indices") {
  const Ops& scalar = hcl::kernels::scalar_ops();
  std::vector<double> vals{0.5, 0.25, 1.0, 2.0, 0.125};
  std::vector<std::uint32_t> idx{3, 3, 0, 1, 3};
  std::vector<double> x{2.0, 4.0, 8.0, 16.0};
  const double expected = 0.5 * 16 + 0.25 * 16 + 1.0 * 2 + 2.0 * 4 + 0.125 * 16;
  CHECK(scalar.gather_dot(vals.data(), idx.data(), x.data(), 5) == expected);
  if (const Ops* avx2 = hcl::kernels::avx2_ops()) {
    CHECK(avx2->gather_dot(vals.data(), idx.data(), x.data(), 5) == expected);
  }
}

}  // TEST_SUITE
