#include "strat/kernels.hpp"

namespace strat::kernels {

void axpy_mod_scalar(uint16_t* y, const uint16_t* x, uint16_t c, size_t n, uint16_t p) {
  for (size_t i = 0; i < n; ++i)
    y[i] = static_cast<uint16_t>((y[i] + c * x[i]) % p);
}

void scale_mod_scalar(uint16_t* y, uint16_t c, size_t n, uint16_t p) {
  for (size_t i = 0; i < n; ++i)
    y[i] = static_cast<uint16_t>((c * y[i]) % p);
}

}  // namespace strat::kernels
