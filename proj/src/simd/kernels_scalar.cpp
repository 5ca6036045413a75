#include "p2ode/simd/kernels.hpp"

namespace p2ode::simd {

namespace {

void axpy_scalar(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t c,
                 std::uint32_t p) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t v = dst[i] + static_cast<std::uint64_t>(c) * src[i];
    dst[i] = static_cast<std::uint32_t>(v % p);
  }
}

void eval_scalar(const std::uint32_t* coeffs, const std::uint8_t* exps, std::size_t nterms,
                 unsigned nvars, const std::uint32_t* coords, std::size_t npts, std::uint32_t p,
                 std::uint32_t* out) {
  for (std::size_t i = 0; i < npts; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t t = 0; t < nterms; ++t) {
      std::uint64_t term = coeffs[t];
      for (unsigned v = 0; v < nvars; ++v) {
        std::uint64_t x = coords[v * npts + i];
        for (unsigned e = exps[t * nvars + v]; e > 0; --e) term = term * x % p;
      }
      acc += term;
      if (acc >= p) acc -= p;
    }
    out[i] = static_cast<std::uint32_t>(acc);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &axpy_scalar, &eval_scalar};
  return table;
}

}  // namespace p2ode::simd
