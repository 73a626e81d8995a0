#include "cliffcalc/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace cliff::kern {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels* select_initial() {
  const char* env = std::getenv("CLIFFCALC_KERNELS");
  if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels;
  const Kernels* avx2 = avx2_kernels();
  if (env && std::strcmp(env, "avx2") == 0 && avx2 && cpu_has_avx2()) return avx2;
  if (!env && avx2 && cpu_has_avx2()) return avx2;
  return &scalar_kernels;
}

std::atomic<const Kernels*>& slot() {
  static std::atomic<const Kernels*> s{select_initial()};
  return s;
}

}  // namespace

const Kernels& active() { return *slot().load(std::memory_order_relaxed); }

bool force(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    slot().store(&scalar_kernels, std::memory_order_relaxed);
    return true;
  }
  if (std::strcmp(name, "avx2") == 0) {
    const Kernels* avx2 = avx2_kernels();
    if (!avx2 || !cpu_has_avx2()) return false;
    slot().store(avx2, std::memory_order_relaxed);
    return true;
  }
  return false;
}

}  // namespace cliff::kern
