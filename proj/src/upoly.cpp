#include "strat/upoly.hpp"

#include <algorithm>
#include <sstream>

namespace strat {

namespace {

uint16_t inv_mod(uint16_t a, uint16_t p) {
  uint32_t r = 1, b = a, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<uint16_t>(r);
}

}  // namespace

UPoly UPoly::operator+(const UPoly& o) const {
  if (p_ != o.p_) fail(ErrorKind::Dimension, "mixed moduli");
  std::vector<uint16_t> c(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = static_cast<uint16_t>((coeff(i) + o.coeff(i)) % p_);
  return UPoly(p_, std::move(c));
}

UPoly UPoly::operator-(const UPoly& o) const {
  if (p_ != o.p_) fail(ErrorKind::Dimension, "mixed moduli");
  std::vector<uint16_t> c(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = static_cast<uint16_t>((coeff(i) + p_ - o.coeff(i)) % p_);
  return UPoly(p_, std::move(c));
}

UPoly UPoly::operator*(const UPoly& o) const {
  if (p_ != o.p_) fail(ErrorKind::Dimension, "mixed moduli");
  if (is_zero() || o.is_zero()) return UPoly(p_);
  std::vector<uint16_t> c(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j)
      c[i + j] = static_cast<uint16_t>((c[i + j] + c_[i] * o.c_[j]) % p_);
  return UPoly(p_, std::move(c));
}

UPoly UPoly::scaled(uint16_t c) const {
  std::vector<uint16_t> r(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r[i] = static_cast<uint16_t>(c_[i] * (c % p_) % p_);
  return UPoly(p_, std::move(r));
}

UPoly UPoly::shifted(size_t k) const {
  if (is_zero()) return *this;
  std::vector<uint16_t> r(c_.size() + k, 0);
  std::copy(c_.begin(), c_.end(), r.begin() + static_cast<long>(k));
  return UPoly(p_, std::move(r));
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& d) const {
  if (d.is_zero()) fail(ErrorKind::Validation, "division by zero polynomial");
  UPoly r = *this;
  std::vector<uint16_t> q(r.c_.size() > d.c_.size() ? r.c_.size() - d.c_.size() + 1 : 1, 0);
  uint16_t lcinv = inv_mod(d.leading(), p_);
  while (!r.is_zero() && r.degree() >= d.degree()) {
    size_t shift = static_cast<size_t>(r.degree() - d.degree());
    uint16_t f = static_cast<uint16_t>(r.leading() * lcinv % p_);
    q[shift] = f;
    r = r - d.scaled(f).shifted(shift);
  }
  return {UPoly(p_, std::move(q)), r};
}

bool UPoly::divisible_by(const UPoly& d, UPoly* quotient) const {
  auto [q, r] = divmod(d);
  if (!r.is_zero()) return false;
  if (quotient) *quotient = q;
  return true;
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(inv_mod(leading(), p_));
}

uint16_t UPoly::eval(uint16_t x) const {
  uint32_t acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = (acc * x + c_[i]) % p_;
  return static_cast<uint16_t>(acc);
}

std::string UPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << c_[i];
    } else {
      if (c_[i] != 1) os << c_[i] << "*";
      os << var;
      if (i != 1) os << "^" << i;
    }
  }
  return os.str();
}

UPoly upoly_gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

}  // namespace strat
