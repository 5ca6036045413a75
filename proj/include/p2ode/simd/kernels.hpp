#pragma once

// Data-parallel modular kernels used by the prime-field hot loops: row
// updates in elimination and batched polynomial evaluation during screening.
//
// Every kernel has a scalar reference implementation; vector variants must
// agree with it bit for bit. The active table is chosen once at runtime
// from the CPU features (override with P2ODE_SIMD=scalar).

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace p2ode::simd {

/// Vector kernels reduce through double precision, so operands and modulus
/// must stay below 2^25.
inline constexpr std::uint32_t kMaxKernelModulus = 1u << 25;

struct KernelTable {
  std::string_view name;

  /// dst[i] = (dst[i] + c * src[i]) mod p for i < n; inputs reduced mod p.
  void (*axpy)(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t c,
               std::uint32_t p);

  /// Evaluates sum_t coeffs[t] * prod_v x_v^exps[t*nvars+v] at npts points.
  /// coords is structure-of-arrays: coords[v*npts + i] is variable v of
  /// point i.
  void (*eval)(const std::uint32_t* coeffs, const std::uint8_t* exps, std::size_t nterms,
               unsigned nvars, const std::uint32_t* coords, std::size_t npts, std::uint32_t p,
               std::uint32_t* out);
};

const KernelTable& scalar_kernels();

/// Null when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();

bool cpu_has_avx2();

/// The table used by library code.
const KernelTable& active_kernels();

}  // namespace p2ode::simd
