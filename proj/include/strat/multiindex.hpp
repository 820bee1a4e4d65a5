#ifndef STRAT_MULTIINDEX_HPP
#define STRAT_MULTIINDEX_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strat/fp.hpp"

namespace strat {

// Exponent vector / operator index.  Componentwise partial order, total
// graded-lex order, and Lucas-style binomial arithmetic live here.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(size_t n) : e_(n, 0) {}
  explicit MultiIndex(std::vector<uint32_t> e) : e_(std::move(e)) {}
  MultiIndex(std::initializer_list<uint32_t> e) : e_(e) {}
  static MultiIndex unit(size_t n, size_t i);

  size_t size() const { return e_.size(); }
  uint32_t operator[](size_t i) const { return e_[i]; }
  uint32_t& operator[](size_t i) { return e_[i]; }
  const std::vector<uint32_t>& exponents() const { return e_; }

  // |n| = sum of entries: the operator order / total degree.
  uint64_t order() const;
  bool is_zero() const;

  bool leq(const MultiIndex& o) const;  // componentwise
  MultiIndex plus(const MultiIndex& o) const;
  MultiIndex minus(const MultiIndex& o) const;  // requires o.leq(*this)
  MultiIndex scaled(uint32_t c) const;

  // Exponents of the flagged positions divided by p; nullopt when not all
  // divisible (the untwist obstruction test).
  std::optional<MultiIndex> divided(uint32_t p, const std::vector<bool>& positions) const;

  std::string str() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }
  friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }

 private:
  std::vector<uint32_t> e_;
};

// Graded lexicographic: degree first, then lex with earlier variables larger.
bool grlex_less(const MultiIndex& a, const MultiIndex& b);

struct GrlexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return grlex_less(a, b); }
};

// Binomial coefficient C(m, n) mod p via Lucas' digit product; 0 when any
// n_i > m_i.  Lengths must agree.
Fp lucas_binomial(const MultiIndex& m, const MultiIndex& n, Prime p);

// Scalar version for single components.
uint32_t lucas_binomial1(uint64_t m, uint64_t n, uint32_t p);

// All indices with |m| <= degree over nvars variables, graded-lex ascending.
std::vector<MultiIndex> monomials_up_to(size_t nvars, uint32_t degree);

// Same, but the exponent of variable i must be a multiple of step[i]
// (step 1 = unconstrained).  Used for twisted subring enumeration.
std::vector<MultiIndex> monomials_up_to_stepped(size_t nvars, uint32_t degree,
                                                const std::vector<uint32_t>& step);

}  // namespace strat

#endif  // STRAT_MULTIINDEX_HPP
