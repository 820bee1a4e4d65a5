#ifndef STRAT_DIFFOP_HPP
#define STRAT_DIFFOP_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strat/poly.hpp"

namespace strat {

// A differential operator written in the left module basis of divided-power
// operators: op = sum of coeff(n) * D_n, where D_n acts on monomials of the
// active variables by D_n(x^m) = C(m, n) x^{m-n} and treats every other
// variable as a constant.  The order-zero index holds the multiplication
// part.  The basis operators commute with each other but not with
// multiplications; composition renormalizes back to this left form using the
// divided-power Leibniz rule
//   D_n(f g) = sum_{a+b=n} D_a(f) D_b(g)
// together with D_a D_b = C(a+b, b) D_{a+b}.
class DiffOp {
 public:
  using Terms = std::map<MultiIndex, Poly, GrlexLess>;

  DiffOp(uint16_t p, std::vector<std::string> ring_vars, std::vector<std::string> active_vars);

  // Basis operator D_n (n indexed by the active variables).
  static DiffOp basis(uint16_t p, std::vector<std::string> ring_vars,
                      std::vector<std::string> active_vars, MultiIndex n);
  // Multiplication by a: the operator t_a.
  static DiffOp mult(const Poly& a, std::vector<std::string> active_vars);

  uint16_t modulus() const { return p_; }
  const std::vector<std::string>& ring_vars() const { return ring_vars_; }
  const std::vector<std::string>& active_vars() const { return active_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // max |n| over stored indices; nullopt for the zero operator
  std::optional<uint64_t> order() const;

  Poly apply(const Poly& f) const;
  DiffOp compose(const DiffOp& other) const;  // this after other
  DiffOp operator+(const DiffOp& o) const;
  DiffOp operator-(const DiffOp& o) const;
  DiffOp scaled_by(const Poly& f) const;  // left multiplication t_f . op

  // [this, t_a] = this . t_a - t_a . this; order drops when the order-zero
  // part vanishes.
  DiffOp commutator_with_mult(const Poly& a) const;

  std::string str() const;

  friend bool operator==(const DiffOp& x, const DiffOp& y) {
    return x.p_ == y.p_ && x.ring_vars_ == y.ring_vars_ && x.active_vars_ == y.active_vars_ &&
           x.terms_ == y.terms_;
  }

 private:
  void add_term(const MultiIndex& n, const Poly& coeff);
  void require_compatible(const DiffOp& o) const;

  uint16_t p_;
  std::vector<std::string> ring_vars_;
  std::vector<std::string> active_vars_;
  std::vector<size_t> active_pos_;  // positions of active vars in ring_vars
  Terms terms_;
};

}  // namespace strat

#endif  // STRAT_DIFFOP_HPP
