#include "strat/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "strat/errors.hpp"

namespace strat {

Poly Poly::constant(uint16_t p, std::vector<std::string> vars, uint32_t c) {
  Poly f(p, std::move(vars));
  f.add_term(MultiIndex(f.vars_.size()), c);
  return f;
}

Poly Poly::variable(uint16_t p, std::vector<std::string> vars, const std::string& name) {
  Poly f(p, std::move(vars));
  f.add_term(MultiIndex::unit(f.vars_.size(), f.var_index(name)), 1);
  return f;
}

Poly Poly::monomial(uint16_t p, std::vector<std::string> vars, MultiIndex m, uint32_t c) {
  Poly f(p, std::move(vars));
  if (m.size() != f.vars_.size()) fail(ErrorKind::Dimension, "monomial exponent length mismatch");
  f.add_term(m, c);
  return f;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
}

uint16_t Poly::constant_value() const {
  if (terms_.empty()) return 0;
  if (!is_constant()) fail(ErrorKind::Validation, "polynomial is not constant");
  return terms_.begin()->second;
}

int Poly::total_degree() const {
  if (terms_.empty()) return -1;
  // graded-lex map: the last key has maximal degree
  return static_cast<int>(terms_.rbegin()->first.order());
}

int Poly::degree_in(const std::vector<size_t>& positions) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) {
    (void)c;
    uint64_t s = 0;
    for (size_t i : positions) s += m[i];
    d = std::max(d, static_cast<int>(s));
  }
  return d;
}

size_t Poly::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return i;
  fail(ErrorKind::Name, "unknown variable '" + name + "'");
}

uint16_t Poly::coeff(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

void Poly::add_term(const MultiIndex& m, uint32_t c) {
  c %= p_;
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(m, static_cast<uint16_t>(c));
  if (!fresh) {
    uint32_t v = (it->second + c) % p_;
    if (v == 0)
      terms_.erase(it);
    else
      it->second = static_cast<uint16_t>(v);
  }
}

void Poly::require_same_ring(const Poly& o) const {
  if (p_ != o.p_ || vars_ != o.vars_)
    fail(ErrorKind::Dimension, "polynomials live in different rings");
}

Poly Poly::operator+(const Poly& o) const {
  require_same_ring(o);
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  require_same_ring(o);
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, p_ - c);
  return r;
}

Poly Poly::operator-() const {
  Poly r(p_, vars_);
  for (const auto& [m, c] : terms_) r.add_term(m, p_ - c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  require_same_ring(o);
  Poly r(p_, vars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma.plus(mb), ca * cb);
  return r;
}

Poly Poly::scaled(uint32_t c) const {
  Poly r(p_, vars_);
  for (const auto& [m, v] : terms_) r.add_term(m, v * (c % p_));
  return r;
}

Poly Poly::eval_partial(const std::map<std::string, uint32_t>& assignment) const {
  std::vector<std::optional<uint32_t>> fixed(vars_.size());
  for (const auto& [name, value] : assignment) fixed[var_index(name)] = value % p_;
  Poly r(p_, vars_);
  for (const auto& [m, c] : terms_) {
    uint32_t scale = c;
    MultiIndex mm = m;
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (!fixed[i]) continue;
      for (uint32_t e = 0; e < m[i] && scale; ++e) scale = scale * *fixed[i] % p_;
      mm[i] = 0;
    }
    r.add_term(mm, scale);
  }
  return r;
}

Poly Poly::frobenius(const std::vector<std::string>& twist_vars) const {
  std::vector<bool> twist(vars_.size(), false);
  for (const auto& name : twist_vars) twist[var_index(name)] = true;
  Poly r(p_, vars_);
  for (const auto& [m, c] : terms_) {
    MultiIndex mm = m;
    for (size_t i = 0; i < vars_.size(); ++i)
      if (twist[i]) mm[i] = m[i] * p_;
    r.add_term(mm, c);
  }
  return r;
}

std::optional<Poly> Poly::unfrobenius(const std::vector<std::string>& twist_vars) const {
  std::vector<bool> twist(vars_.size(), false);
  for (const auto& name : twist_vars) twist[var_index(name)] = true;
  Poly r(p_, vars_);
  for (const auto& [m, c] : terms_) {
    auto mm = m.divided(p_, twist);
    if (!mm) return std::nullopt;
    r.add_term(*mm, c);
  }
  return r;
}

Poly Poly::derivative(size_t position) const {
  Poly r(p_, vars_);
  for (const auto& [m, c] : terms_) {
    if (m[position] == 0) continue;
    MultiIndex mm = m;
    mm[position] -= 1;
    r.add_term(mm, c * (m[position] % p_));
  }
  return r;
}

Poly Poly::dpow(const std::vector<size_t>& positions, const MultiIndex& n) const {
  if (n.size() != positions.size())
    fail(ErrorKind::Dimension, "operator index does not match the active variables");
  Poly r(p_, vars_);
  for (const auto& [m, c] : terms_) {
    uint32_t binom = 1;
    bool ok = true;
    MultiIndex mm = m;
    for (size_t k = 0; k < positions.size() && ok; ++k) {
      size_t i = positions[k];
      if (n[k] > m[i]) {
        ok = false;
        break;
      }
      binom = binom * lucas_binomial1(m[i], n[k], p_) % p_;
      mm[i] = m[i] - n[k];
    }
    if (ok && binom) r.add_term(mm, c * binom);
  }
  return r;
}

Poly Poly::with_vars(const std::vector<std::string>& new_vars) const {
  // A variable may be dropped only when it does not occur.
  constexpr size_t kAbsent = static_cast<size_t>(-1);
  std::vector<size_t> where(vars_.size(), kAbsent);
  for (size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(new_vars.begin(), new_vars.end(), vars_[i]);
    if (it != new_vars.end()) where[i] = static_cast<size_t>(it - new_vars.begin());
  }
  Poly r(p_, new_vars);
  for (const auto& [m, c] : terms_) {
    MultiIndex mm(new_vars.size());
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (m[i] == 0) continue;
      if (where[i] == kAbsent)
        fail(ErrorKind::Name, "variable '" + vars_[i] + "' occurs but is missing from the target ring");
      mm[where[i]] = m[i];
    }
    r.add_term(mm, c);
  }
  return r;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // graded-lex descending
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    if (!first) os << " + ";
    first = false;
    bool has_mon = !m.is_zero();
    if (c != 1 || !has_mon) os << c;
    bool star = c != 1 && has_mon;
    for (size_t i = 0; i < vars_.size(); ++i) {
      if (m[i] == 0) continue;
      if (star) os << '*';
      star = true;
      os << vars_[i];
      if (m[i] != 1) os << '^' << m[i];
    }
  }
  return os.str();
}

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
};

uint64_t parse_number(Cursor& c) {
  c.skip_ws();
  size_t start = c.i;
  uint64_t v = 0;
  while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
    v = v * 10 + static_cast<uint64_t>(c.s[c.i] - '0');
    if (v > 1'000'000'000ull) fail(ErrorKind::Parse, "number too large");
    ++c.i;
  }
  if (c.i == start) fail(ErrorKind::Parse, "expected a number at offset " + std::to_string(c.i));
  return v;
}

std::string parse_ident(Cursor& c) {
  c.skip_ws();
  size_t start = c.i;
  if (c.i < c.s.size() &&
      (std::isalpha(static_cast<unsigned char>(c.s[c.i])) || c.s[c.i] == '_')) {
    ++c.i;
    while (c.i < c.s.size() && (std::isalnum(static_cast<unsigned char>(c.s[c.i])) ||
                                c.s[c.i] == '_'))
      ++c.i;
  }
  if (c.i == start)
    fail(ErrorKind::Parse, "expected a variable name at offset " + std::to_string(c.i));
  return c.s.substr(start, c.i - start);
}

}  // namespace

Poly Poly::parse(const std::string& text, uint16_t p, std::vector<std::string> vars) {
  Poly r(p, vars);
  Cursor c{text};
  if (c.done()) fail(ErrorKind::Parse, "empty polynomial");
  while (true) {
    // one term: [coefficient] [* v^e]*  or bare monomial
    uint32_t coeff = 1;
    bool saw_coeff = false;
    MultiIndex m(vars.size());
    if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      uint64_t v = parse_number(c);
      if (v >= p)
        fail(ErrorKind::Parse, "coefficient " + std::to_string(v) + " out of range for p=" +
                                   std::to_string(p));
      coeff = static_cast<uint32_t>(v);
      saw_coeff = true;
    }
    bool expect_factor = !saw_coeff;
    while (true) {
      if (c.peek() == '*') {
        ++c.i;
        expect_factor = true;
      } else if (!expect_factor) {
        break;
      }
      std::string name = parse_ident(c);
      size_t idx = r.var_index(name);
      uint32_t e = 1;
      if (c.peek() == '^') {
        ++c.i;
        uint64_t v = parse_number(c);
        if (v > 100000) fail(ErrorKind::Parse, "exponent too large");
        e = static_cast<uint32_t>(v);
      }
      m[idx] += e;
      expect_factor = false;
    }
    r.add_term(m, coeff);
    if (c.done()) break;
    if (c.peek() != '+')
      fail(ErrorKind::Parse, "unexpected character '" + std::string(1, c.peek()) +
                                 "' at offset " + std::to_string(c.i));
    ++c.i;
    if (c.done()) fail(ErrorKind::Parse, "dangling '+'");
  }
  return r;
}

}  // namespace strat
