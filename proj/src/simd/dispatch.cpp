#include "p2ode/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace p2ode::simd {

#ifndef P2ODE_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* env = std::getenv("P2ODE_SIMD");
    if (env && std::string_view(env) == "scalar") return scalar_kernels();
    if (cpu_has_avx2() && avx2_kernels()) return *avx2_kernels();
    return scalar_kernels();
  }();
  return table;
}

}  // namespace p2ode::simd
