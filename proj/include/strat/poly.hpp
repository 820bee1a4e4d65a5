#ifndef STRAT_POLY_HPP
#define STRAT_POLY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strat/fp.hpp"
#include "strat/multiindex.hpp"

namespace strat {

// Sparse multivariate polynomial over F_p with a fixed, ordered variable
// list.  No zero coefficients are ever stored; the term map is keyed by
// graded-lex order, so printing, hashing and iteration are canonical.
// Values are immutable in spirit: every operation returns a fresh Poly.
class Poly {
 public:
  using Terms = std::map<MultiIndex, uint16_t, GrlexLess>;

  Poly() : p_(2) {}
  Poly(uint16_t p, std::vector<std::string> vars) : p_(p), vars_(std::move(vars)) {}

  static Poly constant(uint16_t p, std::vector<std::string> vars, uint32_t c);
  static Poly variable(uint16_t p, std::vector<std::string> vars, const std::string& name);
  static Poly monomial(uint16_t p, std::vector<std::string> vars, MultiIndex m, uint32_t c);

  uint16_t modulus() const { return p_; }
  const std::vector<std::string>& vars() const { return vars_; }
  const Terms& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  uint16_t constant_value() const;  // requires is_constant()
  // max |m| over terms; -1 for the zero polynomial
  int total_degree() const;
  // same, counting only exponents of the given variable positions
  int degree_in(const std::vector<size_t>& positions) const;

  size_t var_index(const std::string& name) const;  // Name error when absent
  uint16_t coeff(const MultiIndex& m) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(uint32_t c) const;

  // Substitute constants for some variables; remaining variables untouched,
  // the variable list is preserved.
  Poly eval_partial(const std::map<std::string, uint32_t>& assignment) const;

  // x -> x^p on the twisted variables only; coefficients unchanged.
  Poly frobenius(const std::vector<std::string>& twist_vars) const;

  // Exponents of twisted variables divided by p; nullopt when some exponent
  // is not a multiple of p ("does this lie in the twisted subring?").
  std::optional<Poly> unfrobenius(const std::vector<std::string>& twist_vars) const;

  // d/d(var at position i)
  Poly derivative(size_t position) const;

  // Divided-power operator D_n over the given variable positions:
  // D_n(x^m) = C(m, n) x^{m-n} on the active block, other variables inert.
  Poly dpow(const std::vector<size_t>& positions, const MultiIndex& n) const;

  // Rebuild this polynomial over a (super)set of variables.  Every current
  // variable must appear in new_vars.
  Poly with_vars(const std::vector<std::string>& new_vars) const;

  std::string str() const;  // graded-lex descending, canonical
  static Poly parse(const std::string& text, uint16_t p, std::vector<std::string> vars);

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.p_ == b.p_ && a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  void add_term(const MultiIndex& m, uint32_t c);
  void require_same_ring(const Poly& o) const;

  uint16_t p_;
  std::vector<std::string> vars_;
  Terms terms_;
};

}  // namespace strat

#endif  // STRAT_POLY_HPP
