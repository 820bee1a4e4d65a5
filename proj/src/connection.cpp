#include "strat/connection.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

#include "strat/errors.hpp"
#include "strat/linalg.hpp"

namespace strat {

std::vector<std::string> Connection::vars() const {
  std::vector<std::string> v = fiber_vars;
  v.insert(v.end(), base_vars.begin(), base_vars.end());
  return v;
}

Connection Connection::trivial(uint16_t p, std::vector<std::string> fiber_vars,
                               std::vector<std::string> base_vars, size_t rank) {
  Connection c;
  c.p = p;
  c.fiber_vars = std::move(fiber_vars);
  c.base_vars = std::move(base_vars);
  c.rank = rank;
  for (size_t i = 0; i < c.fiber_vars.size(); ++i)
    c.matrices.push_back(PolyMat(rank, rank, p, c.vars()));
  return c;
}

std::vector<std::string> Frame::vars() const {
  std::vector<std::string> v = fiber_vars;
  v.insert(v.end(), base_vars.begin(), base_vars.end());
  return v;
}

uint32_t default_descent_cap(const Connection& c) {
  int d = 0;
  for (const auto& a : c.matrices) d = std::max(d, a.max_degree());
  return 4u * (1u + static_cast<uint32_t>(d));
}

std::vector<Poly> connection_apply(const Connection& c, size_t fiber_index,
                                   const std::vector<Poly>& v) {
  if (fiber_index >= c.fiber_vars.size()) fail(ErrorKind::Dimension, "fiber index out of range");
  Poly probe(c.p, c.vars());
  size_t pos = probe.var_index(c.fiber_vars[fiber_index]);
  std::vector<Poly> r = c.matrices[fiber_index] * v;
  for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] + v[i].derivative(pos);
  return r;
}

bool is_flat(const Connection& c) {
  auto vars = c.vars();
  Poly probe(c.p, vars);
  for (size_t i = 0; i < c.fiber_vars.size(); ++i) {
    size_t pi = probe.var_index(c.fiber_vars[i]);
    for (size_t j = i + 1; j < c.fiber_vars.size(); ++j) {
      size_t pj = probe.var_index(c.fiber_vars[j]);
      PolyMat lhs = c.matrices[j].map([&](const Poly& e) { return e.derivative(pi); }) +
                    c.matrices[i] * c.matrices[j];
      PolyMat rhs = c.matrices[i].map([&](const Poly& e) { return e.derivative(pj); }) +
                    c.matrices[j] * c.matrices[i];
      if (!(lhs == rhs)) return false;
    }
  }
  return true;
}

std::vector<PolyMat> p_curvature(const Connection& c) {
  if (!is_flat(c)) fail(ErrorKind::Integrability, "connection is not integrable");
  auto vars = c.vars();
  std::vector<PolyMat> psis;
  for (size_t i = 0; i < c.fiber_vars.size(); ++i) {
    PolyMat psi(c.rank, c.rank, c.p, vars);
    for (size_t j = 0; j < c.rank; ++j) {
      std::vector<Poly> v(c.rank, Poly(c.p, vars));
      v[j] = Poly::constant(c.p, vars, 1);
      for (uint16_t k = 0; k < c.p; ++k) v = connection_apply(c, i, v);
      for (size_t row = 0; row < c.rank; ++row) psi.at(row, j) = v[row];
    }
    psis.push_back(std::move(psi));
  }
  return psis;
}

Connection gauge_transform(const Connection& c, const PolyMat& h) {
  PolyMat hinv = h.inverse_unit();
  auto vars = c.vars();
  Poly probe(c.p, vars);
  Connection r = c;
  for (size_t i = 0; i < c.fiber_vars.size(); ++i) {
    size_t pos = probe.var_index(c.fiber_vars[i]);
    PolyMat dh = h.map([&](const Poly& e) { return e.derivative(pos); });
    r.matrices[i] = hinv * (c.matrices[i] * h + dh);
  }
  return r;
}

namespace {

// Leading (monomial, component) of a polynomial vector; grlex on the
// monomial, component index as tie-break.
struct Lead {
  MultiIndex mon;
  size_t comp = 0;
  uint16_t coeff = 0;
  bool valid = false;
};

Lead leading(const std::vector<Poly>& v) {
  Lead best;
  for (size_t j = 0; j < v.size(); ++j) {
    if (v[j].is_zero()) continue;
    const auto& [m, c] = *v[j].terms().rbegin();
    if (!best.valid || grlex_less(best.mon, m) ||
        (!grlex_less(m, best.mon) && j > best.comp)) {
      best = {m, j, c, true};
    }
  }
  return best;
}

bool vec_is_zero(const std::vector<Poly>& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& e) { return e.is_zero(); });
}

std::vector<Poly> vec_sub_scaled_monomial(const std::vector<Poly>& v,
                                          const std::vector<Poly>& s, const MultiIndex& w,
                                          uint16_t coeff, uint16_t p,
                                          const std::vector<std::string>& vars) {
  Poly factor = Poly::monomial(p, vars, w, coeff);
  std::vector<Poly> r = v;
  for (size_t j = 0; j < r.size(); ++j) r[j] = r[j] - factor * s[j];
  return r;
}

uint16_t inv_mod16(uint16_t a, uint16_t p) {
  uint32_t r = 1, b = a, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<uint16_t>(r);
}

}  // namespace

std::optional<PolyMat> extract_frame(const std::vector<std::vector<Poly>>& kernel_basis,
                                     size_t rank, uint16_t p,
                                     const std::vector<std::string>& ring_vars,
                                     const std::vector<std::string>& twist_vars) {
  if (kernel_basis.size() < rank) return std::nullopt;
  Poly probe(p, ring_vars);
  std::vector<bool> twisted_pos(ring_vars.size(), false);
  for (const auto& n : twist_vars) twisted_pos[probe.var_index(n)] = true;

  auto twisted_divisible = [&](const Lead& big, const Lead& small) -> std::optional<MultiIndex> {
    if (big.comp != small.comp) return std::nullopt;
    if (!small.mon.leq(big.mon)) return std::nullopt;
    MultiIndex w = big.mon.minus(small.mon);
    for (size_t i = 0; i < w.size(); ++i)
      if (twisted_pos[i] && w[i] % p != 0) return std::nullopt;
    return w;
  };

  // Inter-reduce leading terms over the twisted subring (graded-lex pivots,
  // lowest index on ties).
  // stable: ties between equal leading terms keep the canonical input order
  std::vector<std::vector<Poly>> pool = kernel_basis;
  std::stable_sort(pool.begin(), pool.end(), [&](const auto& a, const auto& b) {
    Lead la = leading(a), lb = leading(b);
    if (grlex_less(la.mon, lb.mon)) return true;
    if (grlex_less(lb.mon, la.mon)) return false;
    return la.comp < lb.comp;
  });
  std::vector<std::vector<Poly>> reduced;
  for (auto v : pool) {
    bool changed = true;
    while (changed && !vec_is_zero(v)) {
      changed = false;
      Lead lv = leading(v);
      for (const auto& s : reduced) {
        Lead ls = leading(s);
        auto w = twisted_divisible(lv, ls);
        if (!w) continue;
        uint16_t c = static_cast<uint16_t>(lv.coeff * inv_mod16(ls.coeff, p) % p);
        v = vec_sub_scaled_monomial(v, s, *w, c, p, ring_vars);
        changed = true;
        break;
      }
    }
    if (!vec_is_zero(v)) reduced.push_back(std::move(v));
  }

  // Greedy pick of columns whose values at the origin are independent.
  auto at_origin = [&](const std::vector<Poly>& v) {
    FpRow row(rank, 0);
    for (size_t j = 0; j < rank; ++j) row[j] = v[j].coeff(MultiIndex(ring_vars.size()));
    return row;
  };
  auto build = [&](const std::vector<size_t>& idx) {
    PolyMat g(rank, rank, p, ring_vars);
    for (size_t c = 0; c < idx.size(); ++c)
      for (size_t r = 0; r < rank; ++r) g.at(r, c) = reduced[idx[c]][r];
    return g;
  };
  auto unit_det = [&](const PolyMat& g) {
    Poly d = g.det();
    return d.is_constant() && !d.is_zero();
  };

  RrefAccumulator ev(rank, p);
  std::vector<size_t> chosen;
  for (size_t i = 0; i < reduced.size() && chosen.size() < rank; ++i)
    if (ev.add_row(at_origin(reduced[i]))) chosen.push_back(i);
  if (chosen.size() < rank) return std::nullopt;

  PolyMat g = build(chosen);
  if (unit_det(g)) return g;

  // Rare repair: swap single columns for other pool members, first hit wins.
  for (size_t slot = 0; slot < rank; ++slot) {
    for (size_t i = 0; i < reduced.size(); ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      std::vector<size_t> alt = chosen;
      alt[slot] = i;
      PolyMat g2 = build(alt);
      if (unit_det(g2)) return g2;
    }
  }
  return std::nullopt;
}

namespace {

// F_p-basis of { v : deg(v) <= degree, (d_i + A_i) v = 0 for all fiber i }.
std::vector<std::vector<Poly>> horizontal_kernel(const Connection& c, uint32_t degree) {
  auto vars = c.vars();
  Poly probe(c.p, vars);
  auto mons = monomials_up_to(vars.size(), degree);
  size_t ncols = mons.size() * c.rank;
  auto col_of = [&](size_t mon_idx, size_t comp) { return mon_idx * c.rank + comp; };

  // rows keyed by (fiber var, output monomial, output component)
  std::map<std::tuple<size_t, MultiIndex, size_t>,
           FpRow, bool (*)(const std::tuple<size_t, MultiIndex, size_t>&,
                           const std::tuple<size_t, MultiIndex, size_t>&)>
      rows([](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        if (grlex_less(std::get<1>(a), std::get<1>(b))) return true;
        if (grlex_less(std::get<1>(b), std::get<1>(a))) return false;
        return std::get<2>(a) < std::get<2>(b);
      });
  auto put = [&](size_t fv, const MultiIndex& m, size_t comp, size_t col, uint16_t val) {
    if (val == 0) return;
    auto it = rows.find({fv, m, comp});
    if (it == rows.end()) it = rows.emplace(std::make_tuple(fv, m, comp), FpRow(ncols, 0)).first;
    it->second[col] = static_cast<uint16_t>((it->second[col] + val) % c.p);
  };

  for (size_t fv = 0; fv < c.fiber_vars.size(); ++fv) {
    size_t pos = probe.var_index(c.fiber_vars[fv]);
    for (size_t mi = 0; mi < mons.size(); ++mi) {
      const MultiIndex& m = mons[mi];
      for (size_t j = 0; j < c.rank; ++j) {
        size_t col = col_of(mi, j);
        // derivative part
        if (m[pos] % c.p != 0) {
          MultiIndex dm = m;
          dm[pos] -= 1;
          put(fv, dm, j, col, static_cast<uint16_t>(m[pos] % c.p));
        }
        // A_i column j times x^m
        for (size_t out = 0; out < c.rank; ++out) {
          const Poly& e = c.matrices[fv].at(out, j);
          for (const auto& [em, ec] : e.terms()) put(fv, em.plus(m), out, col, ec);
        }
      }
    }
  }

  RrefAccumulator acc(ncols, c.p);
  for (auto& [key, row] : rows) {
    (void)key;
    acc.add_row(std::move(row));
  }
  std::vector<std::vector<Poly>> basis;
  for (const auto& coeffs : acc.kernel_basis()) {
    std::vector<Poly> v(c.rank, Poly(c.p, vars));
    for (size_t mi = 0; mi < mons.size(); ++mi)
      for (size_t j = 0; j < c.rank; ++j) {
        uint16_t val = coeffs[col_of(mi, j)];
        if (val) v[j] = v[j] + Poly::monomial(c.p, vars, mons[mi], val);
      }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

Frame cartier_descent(const Connection& c, const DescentOptions& opts) {
  for (const auto& psi : p_curvature(c))  // Integrability error inside when not flat
    if (!psi.is_zero())
      fail(ErrorKind::Flatness, "p-curvature is nonzero; no descent frame exists");
  uint32_t cap = opts.max_degree.value_or(default_descent_cap(c));
  for (uint32_t d = 0; d <= cap; ++d) {
    auto kernel = horizontal_kernel(c, d);
    if (kernel.size() < c.rank) continue;
    auto g = extract_frame(kernel, c.rank, c.p, c.vars(), c.fiber_vars);
    if (!g) continue;
    Frame f;
    f.p = c.p;
    f.fiber_vars = c.fiber_vars;
    f.base_vars = c.base_vars;
    f.matrix = *g;
    f.det_value = Fp(g->det().constant_value(), c.p);
    return f;
  }
  fail(ErrorKind::DegreeBound,
       "no unit-determinant frame within degree bound " + std::to_string(cap) +
           "; raise the cap to continue the search");
}

Connection frobenius_pullback(const Frame& f, size_t downstairs_rank) {
  if (downstairs_rank != f.matrix.rows())
    fail(ErrorKind::Dimension, "rank does not match the frame size");
  PolyMat ginv = f.matrix.inverse_unit();  // Invertibility error on non-unit det
  Connection c;
  c.p = f.p;
  c.fiber_vars = f.fiber_vars;
  c.base_vars = f.base_vars;
  c.rank = downstairs_rank;
  Poly probe(f.p, f.vars());
  for (const auto& name : f.fiber_vars) {
    size_t pos = probe.var_index(name);
    PolyMat dg = f.matrix.map([&](const Poly& e) { return e.derivative(pos); });
    PolyMat a = dg * ginv;
    c.matrices.push_back(a.map([](const Poly& e) { return -e; }));
  }
  return c;
}

bool frames_equivalent(const Frame& a, const Frame& b) {
  if (a.p != b.p || a.fiber_vars != b.fiber_vars || a.base_vars != b.base_vars ||
      a.matrix.rows() != b.matrix.rows())
    return false;
  PolyMat q = b.matrix.inverse_unit() * a.matrix;
  Poly d = q.det();
  if (!d.is_constant() || d.is_zero()) return false;
  for (size_t i = 0; i < q.rows(); ++i)
    for (size_t j = 0; j < q.cols(); ++j)
      if (!q.at(i, j).unfrobenius(a.fiber_vars)) return false;
  return true;
}

}  // namespace strat
