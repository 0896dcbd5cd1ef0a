#include "hcl/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace hcl::kernels {

#if !defined(HCL_HAVE_AVX2)
const Ops* avx2_ops() { return nullptr; }
#endif

#if !(defined(HCL_HAVE_NEON) && defined(__aarch64__))
const Ops* neon_ops() { return nullptr; }
#endif

namespace {

const Ops* select_default() {
  if (const char* env = std::getenv("HCL_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0 && avx2_ops()) return avx2_ops();
    if (std::strcmp(env, "neon") == 0 && neon_ops()) return neon_ops();
    return &scalar_ops();  // unknown or unavailable name
  }
  if (const Ops* ops = avx2_ops()) return ops;
  if (const Ops* ops = neon_ops()) return ops;
  return &scalar_ops();
}

std::atomic<const Ops*>& active_slot() {
  static std::atomic<const Ops*> slot{select_default()};
  return slot;
}

}  // namespace

const Ops& active() { return *active_slot().load(std::memory_order_relaxed); }

void set_active(const Ops& ops) {
  active_slot().store(&ops, std::memory_order_relaxed);
}

}  // namespace hcl::kernels
