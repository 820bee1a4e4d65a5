#ifndef STRAT_FP_HPP
#define STRAT_FP_HPP

#include <cstdint>
#include <iosfwd>

#include "strat/errors.hpp"

namespace strat {

// Primes are kept desk-scale: binomial digit tables and exhaustive fiber
// scans assume p is tiny.  The bound can be raised per call site.
inline constexpr unsigned kDefaultMaxPrime = 7;

bool is_prime(unsigned n);

// A validated prime characteristic.
class Prime {
 public:
  static Prime make(unsigned p, unsigned max_allowed = kDefaultMaxPrime);
  unsigned value() const { return p_; }

  friend bool operator==(Prime a, Prime b) { return a.p_ == b.p_; }

 private:
  explicit Prime(unsigned p) : p_(p) {}
  unsigned p_;
};

// Residue in [0, p).  Elements carry their modulus; mixing moduli is a
// dimension error, not UB.
class Fp {
 public:
  Fp() : v_(0), p_(2) {}
  Fp(uint32_t value, uint32_t p) : v_(value % p), p_(p) {}

  uint32_t value() const { return v_; }
  uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  Fp operator+(Fp o) const { check(o); return Fp(v_ + o.v_, p_); }
  Fp operator-(Fp o) const { check(o); return Fp(v_ + p_ - o.v_, p_); }
  Fp operator*(Fp o) const { check(o); return Fp(v_ * o.v_, p_); }
  Fp operator-() const { return Fp(p_ - v_, p_); }

  Fp inv() const;
  Fp operator/(Fp o) const { return *this * o.inv(); }
  Fp pow(uint64_t e) const;

  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_ && a.p_ == b.p_; }
  friend bool operator!=(Fp a, Fp b) { return !(a == b); }

 private:
  void check(Fp o) const {
    if (p_ != o.p_) fail(ErrorKind::Dimension, "mixed moduli in F_p arithmetic");
  }
  uint32_t v_;
  uint32_t p_;
};

std::ostream& operator<<(std::ostream& os, Fp x);

}  // namespace strat

#endif  // STRAT_FP_HPP
