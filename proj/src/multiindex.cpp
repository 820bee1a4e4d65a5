#include "strat/multiindex.hpp"

#include <algorithm>
#include <sstream>

#include "strat/errors.hpp"

namespace strat {

MultiIndex MultiIndex::unit(size_t n, size_t i) {
  MultiIndex m(n);
  m.e_[i] = 1;
  return m;
}

uint64_t MultiIndex::order() const {
  uint64_t s = 0;
  for (uint32_t x : e_) s += x;
  return s;
}

bool MultiIndex::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](uint32_t x) { return x == 0; });
}

bool MultiIndex::leq(const MultiIndex& o) const {
  if (size() != o.size()) fail(ErrorKind::Dimension, "multi-index length mismatch");
  for (size_t i = 0; i < size(); ++i)
    if (e_[i] > o.e_[i]) return false;
  return true;
}

MultiIndex MultiIndex::plus(const MultiIndex& o) const {
  if (size() != o.size()) fail(ErrorKind::Dimension, "multi-index length mismatch");
  MultiIndex r(size());
  for (size_t i = 0; i < size(); ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

MultiIndex MultiIndex::minus(const MultiIndex& o) const {
  if (!o.leq(*this)) fail(ErrorKind::Dimension, "multi-index subtraction underflow");
  MultiIndex r(size());
  for (size_t i = 0; i < size(); ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

MultiIndex MultiIndex::scaled(uint32_t c) const {
  MultiIndex r(size());
  for (size_t i = 0; i < size(); ++i) r.e_[i] = e_[i] * c;
  return r;
}

std::optional<MultiIndex> MultiIndex::divided(uint32_t p, const std::vector<bool>& positions) const {
  MultiIndex r(size());
  for (size_t i = 0; i < size(); ++i) {
    if (positions[i]) {
      if (e_[i] % p != 0) return std::nullopt;
      r.e_[i] = e_[i] / p;
    } else {
      r.e_[i] = e_[i];
    }
  }
  return r;
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < size(); ++i) {
    if (i) os << ',';
    os << e_[i];
  }
  os << ')';
  return os.str();
}

bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
  uint64_t da = a.order(), db = b.order();
  if (da != db) return da < db;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return a.size() < b.size();
}

uint32_t lucas_binomial1(uint64_t m, uint64_t n, uint32_t p) {
  if (n > m) return 0;
  uint32_t r = 1;
  while (n > 0 || m > 0) {
    uint64_t md = m % p, nd = n % p;
    if (nd > md) return 0;
    // C(md, nd) for digits < p: tiny Pascal walk
    uint64_t c = 1;
    for (uint64_t i = 0; i < nd; ++i) c = c * (md - i) / (i + 1);
    r = static_cast<uint32_t>((r * (c % p)) % p);
    m /= p;
    n /= p;
  }
  return r;
}

Fp lucas_binomial(const MultiIndex& m, const MultiIndex& n, Prime p) {
  if (m.size() != n.size()) fail(ErrorKind::Dimension, "binomial index length mismatch");
  uint32_t r = 1;
  for (size_t i = 0; i < m.size() && r != 0; ++i)
    r = (r * lucas_binomial1(m[i], n[i], p.value())) % p.value();
  return Fp(r, p.value());
}

namespace {

void enumerate(size_t pos, uint32_t left, MultiIndex& cur, const std::vector<uint32_t>& step,
               std::vector<MultiIndex>& out) {
  if (pos == cur.size()) {
    out.push_back(cur);
    return;
  }
  for (uint32_t e = 0; e <= left; e += step[pos]) {
    cur[pos] = e;
    enumerate(pos + 1, left - e, cur, step, out);
    if (step[pos] == 0) break;  // unreachable guard
  }
  cur[pos] = 0;
}

}  // namespace

std::vector<MultiIndex> monomials_up_to_stepped(size_t nvars, uint32_t degree,
                                                const std::vector<uint32_t>& step) {
  std::vector<MultiIndex> out;
  if (nvars == 0) {
    out.emplace_back(size_t{0});
  } else {
    MultiIndex cur(nvars);
    enumerate(0, degree, cur, step, out);
  }
  std::sort(out.begin(), out.end(), grlex_less);
  return out;
}

std::vector<MultiIndex> monomials_up_to(size_t nvars, uint32_t degree) {
  return monomials_up_to_stepped(nvars, degree, std::vector<uint32_t>(nvars, 1));
}

}  // namespace strat
