#include "strat/fp.hpp"

#include <ostream>
#include <string>

namespace strat {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Prime Prime::make(unsigned p, unsigned max_allowed) {
  if (!is_prime(p))
    fail(ErrorKind::Validation, "characteristic " + std::to_string(p) + " is not prime");
  if (p > max_allowed)
    fail(ErrorKind::Validation, "prime " + std::to_string(p) + " exceeds the configured bound " +
                                    std::to_string(max_allowed));
  return Prime(p);
}

Fp Fp::pow(uint64_t e) const {
  Fp r(1, p_), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

Fp Fp::inv() const {
  if (v_ == 0) fail(ErrorKind::Validation, "inverse of zero in F_p");
  return pow(p_ - 2);  // Fermat; p is prime by construction
}

std::ostream& operator<<(std::ostream& os, Fp x) { return os << x.value(); }

}  // namespace strat
