#ifndef STRAT_KERNELS_HPP
#define STRAT_KERNELS_HPP

#include <cstddef>
#include <cstdint>

namespace strat::kernels {

// Row kernels for dense F_p elimination.  All values live in [0, p) with
// p < 256; intermediate products fit easily in 16 bits.  The AVX2 variants
// must produce bit-identical output to the scalar references; the unit suite
// checks that on exhaustive small ranges and random rows.

enum class Backend { Auto, Scalar, Avx2 };

// Runtime selection: Auto picks AVX2 when the CPU has it, unless the
// STRAT_KERNEL environment variable ("scalar", "avx2", "auto") says otherwise.
void set_backend(Backend b);
const char* active_backend_name();
bool avx2_supported();

// y[i] = (y[i] + c * x[i]) mod p
void axpy_mod(uint16_t* y, const uint16_t* x, uint16_t c, size_t n, uint16_t p);
// y[i] = (c * y[i]) mod p
void scale_mod(uint16_t* y, uint16_t c, size_t n, uint16_t p);

// Scalar references, always available (used directly by equivalence tests).
void axpy_mod_scalar(uint16_t* y, const uint16_t* x, uint16_t c, size_t n, uint16_t p);
void scale_mod_scalar(uint16_t* y, uint16_t c, size_t n, uint16_t p);

#ifdef STRAT_HAVE_AVX2
void axpy_mod_avx2(uint16_t* y, const uint16_t* x, uint16_t c, size_t n, uint16_t p);
void scale_mod_avx2(uint16_t* y, uint16_t c, size_t n, uint16_t p);
#endif

}  // namespace strat::kernels

#endif  // STRAT_KERNELS_HPP
