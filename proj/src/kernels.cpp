#include "strat/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace strat::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(STRAT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend resolve_env() {
  const char* e = std::getenv("STRAT_KERNEL");
  if (e != nullptr) {
    if (std::strcmp(e, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(e, "avx2") == 0) return Backend::Avx2;
  }
  return Backend::Auto;
}

Backend g_backend = resolve_env();

bool use_avx2() {
  switch (g_backend) {
    case Backend::Scalar: return false;
    case Backend::Avx2: return cpu_has_avx2();
    case Backend::Auto: return cpu_has_avx2();
  }
  return false;
}

}  // namespace

void set_backend(Backend b) { g_backend = b; }

bool avx2_supported() { return cpu_has_avx2(); }

const char* active_backend_name() { return use_avx2() ? "avx2" : "scalar"; }

void axpy_mod(uint16_t* y, const uint16_t* x, uint16_t c, size_t n, uint16_t p) {
#ifdef STRAT_HAVE_AVX2
  if (use_avx2()) {
    axpy_mod_avx2(y, x, c, n, p);
    return;
  }
#endif
  axpy_mod_scalar(y, x, c, n, p);
}

void scale_mod(uint16_t* y, uint16_t c, size_t n, uint16_t p) {
#ifdef STRAT_HAVE_AVX2
  if (use_avx2()) {
    scale_mod_avx2(y, c, n, p);
    return;
  }
#endif
  scale_mod_scalar(y, c, n, p);
}

}  // namespace strat::kernels
