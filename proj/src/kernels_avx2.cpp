#include "strat/kernels.hpp"

#ifdef STRAT_HAVE_AVX2

#include <immintrin.h>

namespace strat::kernels {

namespace {

// r in [0, 2p) -> r mod p, per lane.  Relies on unsigned wraparound:
// when r < p, r - p wraps to a huge value and min keeps r.
inline __m256i fold_once(__m256i r, __m256i pv) {
  return _mm256_min_epu16(r, _mm256_sub_epi16(r, pv));
}

// s mod p for s up to ~2^12 via mulhi with M = floor(2^16 / p).  The quotient
// estimate is off by at most one, which the final fold absorbs.
inline __m256i mod_small(__m256i s, __m256i pv, __m256i mv) {
  __m256i q = _mm256_mulhi_epu16(s, mv);
  __m256i r = _mm256_sub_epi16(s, _mm256_mullo_epi16(q, pv));
  return fold_once(r, pv);
}

}  // namespace

void axpy_mod_avx2(uint16_t* y, const uint16_t* x, uint16_t c, size_t n, uint16_t p) {
  const __m256i cv = _mm256_set1_epi16(static_cast<short>(c));
  const __m256i pv = _mm256_set1_epi16(static_cast<short>(p));
  const __m256i mv = _mm256_set1_epi16(static_cast<short>(65536u / p));
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256i xv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
    __m256i yv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + i));
    __m256i s = _mm256_add_epi16(yv, _mm256_mullo_epi16(cv, xv));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(y + i), mod_small(s, pv, mv));
  }
  if (i < n) axpy_mod_scalar(y + i, x + i, c, n - i, p);
}

void scale_mod_avx2(uint16_t* y, uint16_t c, size_t n, uint16_t p) {
  const __m256i cv = _mm256_set1_epi16(static_cast<short>(c));
  const __m256i pv = _mm256_set1_epi16(static_cast<short>(p));
  const __m256i mv = _mm256_set1_epi16(static_cast<short>(65536u / p));
  size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256i yv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + i));
    __m256i s = _mm256_mullo_epi16(cv, yv);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(y + i), mod_small(s, pv, mv));
  }
  if (i < n) scale_mod_scalar(y + i, c, n - i, p);
}

}  // namespace strat::kernels

#endif  // STRAT_HAVE_AVX2
