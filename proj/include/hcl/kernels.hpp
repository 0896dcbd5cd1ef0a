#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by graph construction and degree
// propagation. Every kernel has a scalar reference implementation and,
// where the target supports it, a SIMD variant selected at runtime.
// Variants are equivalence-tested against the scalar reference; each
// variant on its own is deterministic (fixed summation tree).

namespace hcl::kernels {

// sum_i (a[i] - b[i])^2
using L2sqFn = double (*)(const double* a, const double* b, std::size_t n);
// sum_i a[i] * b[i]
using DotFn = double (*)(const double* a, const double* b, std::size_t n);
// sum_p vals[p] * x[idx[p]]  (sparse row/column dot against a dense vector)
using GatherDotFn = double (*)(const double* vals, const std::uint32_t* idx,
                               const double* x, std::size_t n);

struct Ops {
  L2sqFn l2sq;
  DotFn dot;
  GatherDotFn gather_dot;
  const char* name;
};

const Ops& scalar_ops();

// nullptr when the variant is not compiled in or the CPU lacks the ISA.
const Ops* avx2_ops();
const Ops* neon_ops();

// Active table: best available variant, overridable via the HCL_KERNELS
// environment variable (scalar|avx2|neon; unavailable names fall back to
// scalar) or set_active().
const Ops& active();
void set_active(const Ops& ops);

}  // namespace hcl::kernels
