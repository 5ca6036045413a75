// Built with -mavx2 -mfma; only reached through the runtime dispatcher.

#include "p2ode/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace p2ode::simd {

namespace {

struct ModCtx {
  __m256d p;
  __m256d pinv;
  __m256d zero;
};

// Products of two residues below 2^25 are exact in a double, and the
// quotient estimate is off by at most one, so one correction step suffices.
inline __m256d reduce(__m256d v, const ModCtx& m) {
  __m256d q = _mm256_floor_pd(_mm256_mul_pd(v, m.pinv));
  __m256d r = _mm256_fnmadd_pd(q, m.p, v);
  __m256d neg = _mm256_cmp_pd(r, m.zero, _CMP_LT_OQ);
  r = _mm256_add_pd(r, _mm256_and_pd(neg, m.p));
  __m256d big = _mm256_cmp_pd(r, m.p, _CMP_GE_OQ);
  return _mm256_sub_pd(r, _mm256_and_pd(big, m.p));
}

inline __m256d load4(const std::uint32_t* src) {
  __m128i v = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src));
  return _mm256_cvtepi32_pd(v);
}

inline void store4(std::uint32_t* dst, __m256d v) {
  __m128i r = _mm256_cvtpd_epi32(v);
  _mm_storeu_si128(reinterpret_cast<__m128i*>(dst), r);
}

ModCtx make_ctx(std::uint32_t p) {
  return ModCtx{_mm256_set1_pd(static_cast<double>(p)), _mm256_set1_pd(1.0 / static_cast<double>(p)),
                _mm256_setzero_pd()};
}

void axpy_avx2(std::uint32_t* dst, const std::uint32_t* src, std::size_t n, std::uint32_t c,
               std::uint32_t p) {
  const ModCtx m = make_ctx(p);
  const __m256d cv = _mm256_set1_pd(static_cast<double>(c));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_fmadd_pd(cv, load4(src + i), load4(dst + i));
    store4(dst + i, reduce(prod, m));
  }
  scalar_kernels().axpy(dst + i, src + i, n - i, c, p);
}

void eval_avx2(const std::uint32_t* coeffs, const std::uint8_t* exps, std::size_t nterms,
               unsigned nvars, const std::uint32_t* coords, std::size_t npts, std::uint32_t p,
               std::uint32_t* out) {
  const ModCtx m = make_ctx(p);
  constexpr unsigned kMaxVars = 8;
  std::size_t i = 0;
  for (; i + 4 <= npts; i += 4) {
    __m256d x[kMaxVars];
    for (unsigned v = 0; v < nvars && v < kMaxVars; ++v) x[v] = load4(coords + v * npts + i);
    __m256d acc = m.zero;
    for (std::size_t t = 0; t < nterms; ++t) {
      __m256d term = _mm256_set1_pd(static_cast<double>(coeffs[t]));
      for (unsigned v = 0; v < nvars; ++v)
        for (unsigned e = exps[t * nvars + v]; e > 0; --e) term = reduce(_mm256_mul_pd(term, x[v]), m);
      acc = _mm256_add_pd(acc, term);
      __m256d big = _mm256_cmp_pd(acc, m.p, _CMP_GE_OQ);
      acc = _mm256_sub_pd(acc, _mm256_and_pd(big, m.p));
    }
    store4(out + i, acc);
  }
  if (i < npts) {
    // Tail points go through the reference kernel on a compacted copy.
    std::size_t rest = npts - i;
    std::uint32_t tail[kMaxVars * 4];
    for (unsigned v = 0; v < nvars; ++v)
      for (std::size_t j = 0; j < rest; ++j) tail[v * rest + j] = coords[v * npts + i + j];
    scalar_kernels().eval(coeffs, exps, nterms, nvars, tail, rest, p, out + i);
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{"avx2", &axpy_avx2, &eval_avx2};
  return &table;
}

}  // namespace p2ode::simd
