#include "strat/gaussmanin.hpp"

#include <algorithm>

#include "strat/errors.hpp"
#include "strat/linalg.hpp"

namespace strat {

namespace {

uint64_t pow_u64(uint64_t b, uint64_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

void require_split(const Tower& t, const RelativeSplit& split, bool need_single_base,
                   bool need_absolute = true) {
  if (need_absolute && t.mode != TowerMode::Absolute)
    fail(ErrorKind::Mode, "the ambient tower must be absolute");
  if (t.mode == TowerMode::Relative &&
      (split.fiber_vars != t.fiber_vars || split.base_vars != t.base_vars))
    fail(ErrorKind::Mode, "relative towers carry their own fiber/base split");
  std::vector<std::string> merged = split.fiber_vars;
  merged.insert(merged.end(), split.base_vars.begin(), split.base_vars.end());
  std::sort(merged.begin(), merged.end());
  std::vector<std::string> tv = t.vars();
  std::sort(tv.begin(), tv.end());
  if (merged != tv ||
      std::adjacent_find(merged.begin(), merged.end()) != merged.end())
    fail(ErrorKind::Dimension, "split does not partition the tower variables");
  if (split.base_vars.empty())
    fail(ErrorKind::Dimension, "split needs at least one base variable");
  if (need_single_base && split.base_vars.size() != 1)
    fail(ErrorKind::Dimension, "the pushforward needs exactly one base variable");
}

// Full active index of the absolute tower with the fiber block from n and
// zeros (or n_s) on the base block.
MultiIndex embed_index(const Tower& t, const RelativeSplit& split, const MultiIndex& n_fiber,
                       uint64_t n_s) {
  auto act = t.active_vars();
  MultiIndex full(act.size());
  for (size_t k = 0; k < split.fiber_vars.size(); ++k) {
    auto it = std::find(act.begin(), act.end(), split.fiber_vars[k]);
    full[static_cast<size_t>(it - act.begin())] = n_fiber[k];
  }
  if (n_s) {
    auto it = std::find(act.begin(), act.end(), split.base_vars[0]);
    full[static_cast<size_t>(it - act.begin())] = static_cast<uint32_t>(n_s);
  }
  return full;
}

// Split a polynomial into UPoly coefficients of its fiber monomials.
// Requires a single base variable.
std::map<MultiIndex, UPoly, GrlexLess> fiber_decompose(const Poly& f,
                                                       const std::vector<size_t>& fiber_pos,
                                                       size_t base_pos, uint16_t p) {
  std::map<MultiIndex, UPoly, GrlexLess> out;
  for (const auto& [m, c] : f.terms()) {
    MultiIndex fm(fiber_pos.size());
    for (size_t k = 0; k < fiber_pos.size(); ++k) fm[k] = m[fiber_pos[k]];
    uint32_t sdeg = m[base_pos];
    auto it = out.find(fm);
    if (it == out.end()) it = out.emplace(fm, UPoly(p)).first;
    it->second = it->second + UPoly::constant(p, static_cast<uint16_t>(c)).shifted(sdeg);
  }
  return out;
}

UPoly content_gcd(const UPolyMat& m, size_t col) {
  UPoly g(m.modulus());
  for (size_t r = 0; r < m.rows(); ++r) g = upoly_gcd(g, m.at(r, col));
  return g;
}

Poly upoly_to_poly(const UPoly& u, uint16_t p, const std::vector<std::string>& ring_vars,
                   size_t base_pos) {
  Poly f(p, ring_vars);
  for (size_t i = 0; i < u.coeffs().size(); ++i) {
    if (!u.coeff(i)) continue;
    MultiIndex m(ring_vars.size());
    m[base_pos] = static_cast<uint32_t>(i);
    f = f + Poly::monomial(p, ring_vars, m, u.coeff(i));
  }
  return f;
}

}  // namespace

RelativeSplit RelativeSplit::of(const Tower& t) { return {t.fiber_vars, t.base_vars}; }

RelativeH0 relative_h0(const Tower& t, const RelativeSplit& split, size_t level,
                       uint32_t degree_cap) {
  require_split(t, split, true);
  if (level > t.length()) fail(ErrorKind::LevelExceeded, "level exceeds the tower length");
  auto ring = t.vars();
  Poly probe(t.p, ring);
  std::vector<size_t> fiber_pos;
  for (const auto& v : split.fiber_vars) fiber_pos.push_back(probe.var_index(v));
  size_t base_pos = probe.var_index(split.base_vars[0]);

  // operator indices: fiber-supported, 0 < |n| < p^level
  uint64_t bound = pow_u64(t.p, level);
  std::vector<MultiIndex> fiber_indices;
  std::vector<MultiIndex> full_indices;
  for (const auto& n :
       monomials_up_to(split.fiber_vars.size(), static_cast<uint32_t>(bound - 1))) {
    if (n.is_zero()) continue;
    fiber_indices.push_back(n);
    full_indices.push_back(embed_index(t, split, n, 0));
  }
  auto mats = action_matrices(t, full_indices);

  auto fiber_mons = monomials_up_to(split.fiber_vars.size(), degree_cap);
  std::map<MultiIndex, size_t, GrlexLess> fm_pos;
  for (size_t i = 0; i < fiber_mons.size(); ++i) fm_pos[fiber_mons[i]] = i;
  size_t nunknown = fiber_mons.size() * t.rank;
  auto col_of = [&](size_t mi, size_t j) { return mi * t.rank + j; };

  // Equations over F_p[s]: rows keyed by (operator, output fiber monomial,
  // output component).
  Prime prime = Prime::make(t.p);
  struct RowKey {
    size_t op;
    MultiIndex m;
    size_t comp;
    bool operator<(const RowKey& o) const {
      if (op != o.op) return op < o.op;
      if (grlex_less(m, o.m)) return true;
      if (grlex_less(o.m, m)) return false;
      return comp < o.comp;
    }
  };
  std::map<RowKey, std::vector<UPoly>> rows;
  auto put = [&](const RowKey& key, size_t col, const UPoly& val) {
    if (val.is_zero()) return;
    auto it = rows.find(key);
    if (it == rows.end())
      it = rows.emplace(key, std::vector<UPoly>(nunknown, UPoly(t.p))).first;
    it->second[col] = it->second[col] + val;
  };

  for (size_t oi = 0; oi < fiber_indices.size(); ++oi) {
    const MultiIndex& n = fiber_indices[oi];
    for (size_t mi = 0; mi < fiber_mons.size(); ++mi) {
      const MultiIndex& m = fiber_mons[mi];
      // splits a <= min(n, m)
      std::vector<MultiIndex> splits = {MultiIndex(n.size())};
      for (size_t k = 0; k < n.size(); ++k) {
        std::vector<MultiIndex> grown;
        for (const auto& a : splits)
          for (uint32_t e = 0; e <= std::min(n[k], m[k]); ++e) {
            MultiIndex aa = a;
            aa[k] = e;
            grown.push_back(aa);
          }
        splits = std::move(grown);
      }
      for (const auto& a : splits) {
        Fp binom = lucas_binomial(m, a, prime);
        if (binom.is_zero()) continue;
        MultiIndex mshift = m.minus(a);
        MultiIndex b = n.minus(a);
        for (size_t j = 0; j < t.rank; ++j) {
          if (b.is_zero()) {
            // D_n(x^m) e_j
            RowKey key{oi, mshift, j};
            put(key, col_of(mi, j), UPoly::constant(t.p, static_cast<uint16_t>(binom.value())));
            continue;
          }
          const PolyMat& mb = mats.at(embed_index(t, split, b, 0));
          for (size_t out = 0; out < t.rank; ++out) {
            auto parts = fiber_decompose(mb.at(out, j), fiber_pos, base_pos, t.p);
            for (const auto& [fm, coeff] : parts)
              put({oi, fm.plus(mshift), out}, col_of(mi, j),
                  coeff.scaled(static_cast<uint16_t>(binom.value())));
          }
        }
      }
    }
  }

  UPolyMat eq(rows.size(), nunknown, t.p);
  size_t ri = 0;
  for (auto& [key, row] : rows) {
    (void)key;
    for (size_t c = 0; c < nunknown; ++c) eq.at(ri, c) = std::move(row[c]);
    ++ri;
  }

  UPolyMat kernel = pid_kernel(eq);
  // saturation: make columns primitive (a safeguard; Hermite kernels of
  // saturated modules already are)
  bool changed = false;
  for (size_t c = 0; c < kernel.cols(); ++c) {
    UPoly g = content_gcd(kernel, c);
    if (g.is_zero() || g.degree() <= 0) continue;
    for (size_t r = 0; r < kernel.rows(); ++r) {
      UPoly q;
      kernel.at(r, c).divisible_by(g, &q);
      kernel.at(r, c) = q;
    }
    changed = true;
  }
  if (changed) {
    HermiteForm hf = column_hermite(kernel);
    kernel = std::move(hf.h);
  }

  RelativeH0 mod;
  mod.level = level;
  mod.degree_cap = degree_cap;
  mod.fiber_vars = split.fiber_vars;
  mod.base_vars = split.base_vars;
  mod.ring_vars = ring;
  mod.ambient_rank = t.rank;
  mod.fiber_mons = fiber_mons;
  mod.coeffs = std::move(kernel);
  for (size_t c = 0; c < mod.coeffs.cols(); ++c) {
    std::vector<Poly> g(t.rank, Poly(t.p, ring));
    for (size_t mi = 0; mi < fiber_mons.size(); ++mi)
      for (size_t j = 0; j < t.rank; ++j) {
        const UPoly& u = mod.coeffs.at(col_of(mi, j), c);
        if (u.is_zero()) continue;
        MultiIndex full(ring.size());
        for (size_t k = 0; k < fiber_pos.size(); ++k) full[fiber_pos[k]] = fiber_mons[mi][k];
        g[j] = g[j] + Poly::monomial(t.p, ring, full, 1) * upoly_to_poly(u, t.p, ring, base_pos);
      }
    mod.generators.push_back(std::move(g));
  }
  return mod;
}

UPolyMat tau_action(const Tower& t, const RelativeSplit& split, const RelativeH0& module,
                    uint64_t n_s) {
  require_split(t, split, true);
  size_t k = module.rank();
  if (n_s == 0) return UPolyMat::identity(k, t.p);
  if (n_s >= pow_u64(t.p, t.length()))
    fail(ErrorKind::LevelExceeded, "base index exceeds the truncation level");
  Poly probe(t.p, module.ring_vars);
  std::vector<size_t> fiber_pos;
  for (const auto& v : split.fiber_vars) fiber_pos.push_back(probe.var_index(v));
  size_t base_pos = probe.var_index(split.base_vars[0]);

  MultiIndex idx = embed_index(t, split, MultiIndex(split.fiber_vars.size()), n_s);
  std::map<MultiIndex, size_t, GrlexLess> fm_pos;
  for (size_t i = 0; i < module.fiber_mons.size(); ++i) fm_pos[module.fiber_mons[i]] = i;

  UPolyMat result(k, k, t.p);
  for (size_t gc = 0; gc < k; ++gc) {
    std::vector<Poly> image = stratified_action(t, idx, module.generators[gc]);
    // re-express in the (fiber monomial, component) coordinates
    std::vector<UPoly> rhs(module.fiber_mons.size() * module.ambient_rank, UPoly(t.p));
    for (size_t j = 0; j < module.ambient_rank; ++j) {
      auto parts = fiber_decompose(image[j], fiber_pos, base_pos, t.p);
      for (const auto& [fm, coeff] : parts) {
        auto it = fm_pos.find(fm);
        if (it == fm_pos.end())
          fail(ErrorKind::Closure,
               "base action of order " + std::to_string(n_s) +
                   " leaves the truncated module: fiber degree exceeds cap " +
                   std::to_string(module.degree_cap) + " at level " +
                   std::to_string(module.level));
        rhs[it->second * module.ambient_rank + j] = coeff;
      }
    }
    auto sol = pid_solve(module.coeffs, rhs);
    if (!sol)
      fail(ErrorKind::Closure,
           "base action of order " + std::to_string(n_s) +
               " is not an R-combination of the generators (level " +
               std::to_string(module.level) + ", degree cap " +
               std::to_string(module.degree_cap) + ")");
    for (size_t gr = 0; gr < k; ++gr) result.at(gr, gc) = (*sol)[gr];
  }
  return result;
}

GmResult gm_pushforward(const Tower& t, const RelativeSplit& split, size_t level,
                        uint32_t degree_cap, const DescentOptions& opts) {
  require_split(t, split, true);
  if (level == 0 || level > t.length())
    fail(ErrorKind::LevelExceeded, "level must lie in 1..tower length");

  GmResult res;
  res.level = level;
  res.degree_cap = degree_cap;
  for (size_t l = 1; l <= level; ++l) {
    RelativeH0 m = relative_h0(t, split, l, degree_cap);
    res.ranks.push_back(m.rank());
    if (l == level) res.module = std::move(m);
  }
  for (size_t l = 1; l < res.ranks.size(); ++l)
    if (res.ranks[l] == res.ranks[l - 1]) {
      res.stabilized = true;
      res.stabilized_at = l + 1;
      break;
    }

  size_t k = res.module.rank();
  if (k == 0)
    fail(ErrorKind::Validation,
         "relative horizontal sections vanish; the pushforward is the zero sheaf");

  MatrixStratification ms;
  ms.p = t.p;
  ms.vars = split.base_vars;
  ms.rank = k;
  ms.levels = level;
  uint64_t bound = pow_u64(t.p, level);
  for (uint64_t b = 1; b < bound; ++b) {
    UPolyMat action = tau_action(t, split, res.module, b);
    PolyMat pm(k, k, t.p, split.base_vars);
    for (size_t r = 0; r < k; ++r)
      for (size_t c = 0; c < k; ++c) pm.at(r, c) = upoly_to_poly(action.at(r, c), t.p, split.base_vars, 0);
    ms.action.emplace(MultiIndex({static_cast<uint32_t>(b)}), std::move(pm));
  }

  res.gm = tower_from_stratification(ms, opts);
  res.embedding = res.module.generators;
  if (res.gm.rank != k)
    fail(ErrorKind::Validation, "pushforward rank drifted during tower construction");
  return res;
}

Tower fiber_restrict(const Tower& t, const RelativeSplit& split,
                     const std::vector<uint16_t>& point) {
  std::vector<std::string> merged = split.fiber_vars;
  merged.insert(merged.end(), split.base_vars.begin(), split.base_vars.end());
  {
    std::vector<std::string> a = merged, b = t.vars();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) fail(ErrorKind::Dimension, "split does not partition the tower variables");
  }
  if (point.size() != split.base_vars.size())
    fail(ErrorKind::Dimension, "point arity does not match the base variables");
  std::map<std::string, uint32_t> assign;
  for (size_t i = 0; i < point.size(); ++i) {
    uint16_t c = static_cast<uint16_t>(point[i] % t.p);
    // substitution is level-uniform because c^p = c on rational points
    if (Fp(c, t.p).pow(t.p) != Fp(c, t.p))
      fail(ErrorKind::Validation, "point is not fixed by Frobenius");
    assign[split.base_vars[i]] = c;
  }
  Tower f;
  f.p = t.p;
  f.fiber_vars = split.fiber_vars;
  f.base_vars = {};
  f.mode = TowerMode::Absolute;
  f.rank = t.rank;
  for (const auto& s : t.sigmas)
    f.sigmas.push_back(
        s.map([&](const Poly& e) { return e.eval_partial(assign); }).with_vars(split.fiber_vars));
  return f;
}

std::vector<ScanRow> h0_fiber_scan(const Tower& t, const RelativeSplit& split, size_t level,
                                   uint32_t degree_cap) {
  require_split(t, split, false, /*need_absolute=*/false);
  std::vector<ScanRow> rows;
  std::vector<uint16_t> point(split.base_vars.size(), 0);
  while (true) {
    Tower fib = fiber_restrict(t, split, point);
    rows.push_back({point, truncated_h0(fib, level, degree_cap).dimension()});
    // increment the point, last coordinate fastest
    size_t i = point.size();
    while (i > 0) {
      --i;
      if (++point[i] < t.p) break;
      point[i] = 0;
      if (i == 0) return rows;
    }
    if (point.size() == 0) return rows;
  }
}

namespace {

FpRow poly_vector_coeffs(const std::vector<Poly>& v, const std::vector<MultiIndex>& mons,
                         const std::map<MultiIndex, size_t, GrlexLess>& mon_pos, uint16_t p) {
  (void)p;
  FpRow row(mons.size() * v.size(), 0);
  for (size_t j = 0; j < v.size(); ++j)
    for (const auto& [m, c] : v[j].terms()) row[mon_pos.at(m) * v.size() + j] = c;
  return row;
}

}  // namespace

BaseChangeReport base_change_check(const Tower& t, const RelativeSplit& split, size_t level,
                                   uint32_t degree_cap, const DescentOptions& opts) {
  GmResult gm = gm_pushforward(t, split, level, degree_cap, opts);
  BaseChangeReport rep;
  rep.stabilized = gm.stabilized;
  rep.gm_rank = gm.module.rank();
  if (!gm.stabilized) {
    rep.inconclusive = true;
    rep.note = "rank did not stabilize within level " + std::to_string(level) +
               "; comparison skipped (degree cap " + std::to_string(degree_cap) + ")";
    return rep;
  }

  for (uint16_t c = 0; c < t.p; ++c) {
    Tower fib = fiber_restrict(t, split, {c});
    TruncatedH0 h0 = truncated_h0(fib, level, degree_cap);
    std::map<std::string, uint32_t> assign{{split.base_vars[0], c}};
    std::vector<std::vector<Poly>> eval;
    for (const auto& g : gm.embedding) {
      std::vector<Poly> v;
      for (const auto& e : g) v.push_back(e.eval_partial(assign).with_vars(split.fiber_vars));
      eval.push_back(std::move(v));
    }
    // compare F_p-spans inside the coefficient space
    auto mons = monomials_up_to(split.fiber_vars.size(), degree_cap);
    std::map<MultiIndex, size_t, GrlexLess> mon_pos;
    for (size_t i = 0; i < mons.size(); ++i) mon_pos[mons[i]] = i;
    std::vector<FpRow> a, b;
    for (const auto& v : eval) a.push_back(poly_vector_coeffs(v, mons, mon_pos, t.p));
    for (const auto& v : h0.basis) b.push_back(poly_vector_coeffs(v, mons, mon_pos, t.p));
    size_t ncols = mons.size() * t.rank;
    size_t gm_dim = rank(a, ncols, t.p);
    bool equal = same_span(a, b, ncols, t.p);
    rep.points.push_back({c, gm_dim, h0.dimension(), equal});
  }
  rep.all_equal = std::all_of(rep.points.begin(), rep.points.end(),
                              [](const auto& q) { return q.equal; });
  if (!rep.all_equal) {
    // an inequality at these caps downgrades the stabilization claim; it is
    // a truncation finding, not a counterexample
    rep.inconclusive = true;
    rep.note = "fiber comparison failed at some point; treat the stabilization at level " +
               std::to_string(level) + ", degree cap " + std::to_string(degree_cap) +
               " as unverified";
  }
  return rep;
}

MaxSubResult maximal_pullback_sub(const Tower& t, const RelativeSplit& split, size_t level,
                                  uint32_t degree_cap, const DescentOptions& opts) {
  MaxSubResult res{gm_pushforward(t, split, level, degree_cap, opts), {}, false};
  uint32_t coeff_cap = degree_cap + static_cast<uint32_t>(std::max(0, composite_frame(t).max_degree()));
  for (uint16_t c = 0; c < t.p; ++c) {
    Tower fib = fiber_restrict(t, split, {c});
    TruncatedH0 h0 = truncated_h0(fib, level, degree_cap);
    std::map<std::string, uint32_t> assign{{split.base_vars[0], c}};
    std::vector<std::vector<Poly>> eval;
    for (const auto& g : res.gm.embedding) {
      std::vector<Poly> v;
      for (const auto& e : g) v.push_back(e.eval_partial(assign).with_vars(split.fiber_vars));
      eval.push_back(std::move(v));
    }
    bool fw = true, bw = true;
    for (const auto& v : h0.basis)
      if (!in_poly_span(v, eval, coeff_cap)) {
        bw = false;
        break;
      }
    for (const auto& v : eval)
      if (!in_poly_span(v, h0.basis, coeff_cap)) {
        fw = false;
        break;
      }
    res.points.push_back({c, fw && bw, eval.size(), h0.dimension()});
  }
  res.all_equal = std::all_of(res.points.begin(), res.points.end(),
                              [](const auto& q) { return q.equal; });
  return res;
}

Tower external_product(const Tower& a, const Tower& b) {
  if (a.p != b.p) fail(ErrorKind::Mode, "product factors must share the prime");
  if (a.mode != TowerMode::Absolute || b.mode != TowerMode::Absolute)
    fail(ErrorKind::Mode, "external products are defined for absolute towers");
  if (a.length() != b.length())
    fail(ErrorKind::Validation, "product factors must have equal length");
  std::vector<std::string> va = a.vars(), vb = b.vars();
  for (const auto& n : va)
    if (std::find(vb.begin(), vb.end(), n) != vb.end())
      fail(ErrorKind::Name, "variable '" + n + "' appears on both sides of the product");
  std::vector<std::string> merged = va;
  merged.insert(merged.end(), vb.begin(), vb.end());
  Tower t;
  t.p = a.p;
  t.fiber_vars = merged;
  t.base_vars = {};
  t.mode = TowerMode::Absolute;
  t.rank = a.rank * b.rank;
  for (size_t i = 0; i < a.length(); ++i)
    t.sigmas.push_back(a.sigmas[i].with_vars(merged).kronecker(b.sigmas[i].with_vars(merged)));
  return t;
}

bool in_poly_span(const std::vector<Poly>& v, const std::vector<std::vector<Poly>>& gens,
                  uint32_t coeff_degree_cap) {
  if (gens.empty()) return std::all_of(v.begin(), v.end(), [](const Poly& e) { return e.is_zero(); });
  uint16_t p = v.front().modulus();
  const auto& ring = v.front().vars();
  auto cmons = monomials_up_to(ring.size(), coeff_degree_cap);
  size_t nunknown = gens.size() * cmons.size();

  struct Key {
    MultiIndex m;
    size_t comp;
    bool operator<(const Key& o) const {
      if (grlex_less(m, o.m)) return true;
      if (grlex_less(o.m, m)) return false;
      return comp < o.comp;
    }
  };
  std::map<Key, size_t> row_of;
  std::vector<FpRow> rows;
  FpRow rhs;
  auto row_index = [&](const Key& k) {
    auto it = row_of.find(k);
    if (it == row_of.end()) {
      it = row_of.emplace(k, rows.size()).first;
      rows.emplace_back(nunknown, 0);
      rhs.push_back(0);
    }
    return it->second;
  };
  for (size_t g = 0; g < gens.size(); ++g)
    for (size_t w = 0; w < cmons.size(); ++w) {
      size_t col = g * cmons.size() + w;
      for (size_t j = 0; j < gens[g].size(); ++j)
        for (const auto& [m, c] : gens[g][j].terms()) {
          size_t r = row_index({m.plus(cmons[w]), j});
          rows[r][col] = static_cast<uint16_t>((rows[r][col] + c) % p);
        }
    }
  for (size_t j = 0; j < v.size(); ++j)
    for (const auto& [m, c] : v[j].terms()) rhs[row_index({m, j})] = c;
  return solve(rows, rhs, nunknown, p).has_value();
}

}  // namespace strat
