#ifndef STRAT_UPOLY_HPP
#define STRAT_UPOLY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "strat/errors.hpp"

namespace strat {

// Dense univariate polynomial over F_p: the coefficient world of the base
// ring F_p[s] used by the pushforward.  Coefficients ascending, no trailing
// zeros; the zero polynomial has an empty coefficient vector and degree -1.
class UPoly {
 public:
  UPoly() : p_(2) {}
  explicit UPoly(uint16_t p) : p_(p) {}
  UPoly(uint16_t p, std::vector<uint16_t> coeffs) : p_(p), c_(std::move(coeffs)) { trim(); }
  static UPoly constant(uint16_t p, uint16_t v) { return UPoly(p, {static_cast<uint16_t>(v % p)}); }

  uint16_t modulus() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  uint16_t coeff(size_t i) const { return i < c_.size() ? c_[i] : 0; }
  uint16_t leading() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<uint16_t>& coeffs() const { return c_; }

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  UPoly scaled(uint16_t c) const;
  UPoly shifted(size_t k) const;  // * s^k

  // Quotient/remainder; exact over the field of leading coefficients.
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const;
  bool divisible_by(const UPoly& d, UPoly* quotient = nullptr) const;

  UPoly monic() const;
  uint16_t eval(uint16_t x) const;

  std::string str(const std::string& var = "s") const;

  friend bool operator==(const UPoly& a, const UPoly& b) { return a.p_ == b.p_ && a.c_ == b.c_; }
  friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  uint16_t p_;
  std::vector<uint16_t> c_;
};

// Monic gcd (deterministic Euclid).
UPoly upoly_gcd(UPoly a, UPoly b);

}  // namespace strat

#endif  // STRAT_UPOLY_HPP
