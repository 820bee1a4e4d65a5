#include "strat/diffop.hpp"

#include <sstream>

#include "strat/errors.hpp"

namespace strat {

DiffOp::DiffOp(uint16_t p, std::vector<std::string> ring_vars,
               std::vector<std::string> active_vars)
    : p_(p), ring_vars_(std::move(ring_vars)), active_vars_(std::move(active_vars)) {
  Poly probe(p_, ring_vars_);
  for (const auto& v : active_vars_) active_pos_.push_back(probe.var_index(v));
}

DiffOp DiffOp::basis(uint16_t p, std::vector<std::string> ring_vars,
                     std::vector<std::string> active_vars, MultiIndex n) {
  DiffOp op(p, std::move(ring_vars), std::move(active_vars));
  if (n.size() != op.active_vars_.size())
    fail(ErrorKind::Dimension, "operator index does not match the active variables");
  op.add_term(n, Poly::constant(p, op.ring_vars_, 1));
  return op;
}

DiffOp DiffOp::mult(const Poly& a, std::vector<std::string> active_vars) {
  DiffOp op(a.modulus(), a.vars(), std::move(active_vars));
  op.add_term(MultiIndex(op.active_vars_.size()), a);
  return op;
}

std::optional<uint64_t> DiffOp::order() const {
  std::optional<uint64_t> d;
  for (const auto& [n, c] : terms_) {
    (void)c;
    if (!d || n.order() > *d) d = n.order();
  }
  return d;
}

void DiffOp::add_term(const MultiIndex& n, const Poly& coeff) {
  if (coeff.is_zero()) return;
  auto [it, fresh] = terms_.emplace(n, coeff);
  if (!fresh) {
    it->second = it->second + coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void DiffOp::require_compatible(const DiffOp& o) const {
  if (p_ != o.p_ || ring_vars_ != o.ring_vars_ || active_vars_ != o.active_vars_)
    fail(ErrorKind::Dimension, "operators live on different rings");
}

Poly DiffOp::apply(const Poly& f) const {
  if (f.vars() != ring_vars_ || f.modulus() != p_)
    fail(ErrorKind::Dimension, "operand ring does not match the operator ring");
  Poly acc(p_, ring_vars_);
  for (const auto& [n, coeff] : terms_) acc = acc + coeff * f.dpow(active_pos_, n);
  return acc;
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
  require_compatible(o);
  DiffOp r = *this;
  for (const auto& [n, c] : o.terms_) r.add_term(n, c);
  return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const {
  require_compatible(o);
  DiffOp r = *this;
  for (const auto& [n, c] : o.terms_) r.add_term(n, -c);
  return r;
}

DiffOp DiffOp::scaled_by(const Poly& f) const {
  DiffOp r(p_, ring_vars_, active_vars_);
  for (const auto& [n, c] : terms_) r.add_term(n, f * c);
  return r;
}

DiffOp DiffOp::compose(const DiffOp& other) const {
  require_compatible(other);
  DiffOp r(p_, ring_vars_, active_vars_);
  Prime prime = Prime::make(p_);
  for (const auto& [m, f] : terms_) {
    for (const auto& [n, g] : other.terms_) {
      // D_m . t_g . D_n = sum_{a+b=m} t_{D_a(g)} . C(b+n, n) . D_{b+n}
      // enumerate a <= m componentwise
      std::vector<MultiIndex> splits = {MultiIndex(m.size())};
      for (size_t k = 0; k < m.size(); ++k) {
        std::vector<MultiIndex> next;
        for (const auto& a : splits)
          for (uint32_t e = 0; e <= m[k]; ++e) {
            MultiIndex aa = a;
            aa[k] = e;
            next.push_back(aa);
          }
        splits = std::move(next);
      }
      for (const auto& a : splits) {
        Poly da_g = g.dpow(active_pos_, a);
        if (da_g.is_zero()) continue;
        MultiIndex b = m.minus(a);
        MultiIndex bn = b.plus(n);
        Fp c = lucas_binomial(bn, n, prime);
        if (c.is_zero()) continue;
        r.add_term(bn, (f * da_g).scaled(c.value()));
      }
    }
  }
  return r;
}

DiffOp DiffOp::commutator_with_mult(const Poly& a) const {
  DiffOp ta = DiffOp::mult(a.with_vars(ring_vars_), active_vars_);
  return compose(ta) - ta.compose(*this);
}

std::string DiffOp::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [n, c] = *it;
    if (!first) os << " + ";
    first = false;
    bool constant_one = c.is_constant() && c.constant_value() == 1;
    if (!constant_one) {
      bool sum = c.terms().size() > 1;
      os << (sum ? "(" : "") << c.str() << (sum ? ")" : "") << "*";
    }
    os << "D[";
    for (size_t i = 0; i < n.size(); ++i) {
      if (i) os << ',';
      os << n[i];
    }
    os << "]";
  }
  return os.str();
}

}  // namespace strat
