#include "strat/pidlinalg.hpp"

#include <algorithm>

namespace strat {

UPolyMat UPolyMat::identity(size_t n, uint16_t p) {
  UPolyMat m(n, n, p);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = UPoly::constant(p, 1);
  return m;
}

UPolyMat UPolyMat::operator*(const UPolyMat& o) const {
  if (cols_ != o.rows_) fail(ErrorKind::Dimension, "matrix product shape mismatch");
  UPolyMat r(rows_, o.cols_, p_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (size_t j = 0; j < o.cols_; ++j)
        r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
    }
  return r;
}

bool UPolyMat::is_zero_col(size_t c) const {
  for (size_t r = 0; r < rows_; ++r)
    if (!at(r, c).is_zero()) return false;
  return true;
}

namespace {

void col_axpy(UPolyMat& m, size_t dst, size_t src, const UPoly& q) {
  // col[dst] -= q * col[src]
  for (size_t r = 0; r < m.rows(); ++r) m.at(r, dst) = m.at(r, dst) - q * m.at(r, src);
}

void col_swap(UPolyMat& m, size_t a, size_t b) {
  if (a == b) return;
  for (size_t r = 0; r < m.rows(); ++r) std::swap(m.at(r, a), m.at(r, b));
}

void col_scale(UPolyMat& m, size_t c, uint16_t f) {
  for (size_t r = 0; r < m.rows(); ++r) m.at(r, c) = m.at(r, c).scaled(f);
}

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

HermiteForm column_hermite(UPolyMat m) {
  HermiteForm hf;
  UPolyMat v = UPolyMat::identity(m.cols(), m.modulus());
  size_t next = 0;  // next pivot column slot
  for (size_t r = 0; r < m.rows() && next < m.cols(); ++r) {
    // Euclid across the active columns until at most one entry survives in
    // this row.
    while (true) {
      size_t c1 = m.cols(), c2 = m.cols();
      for (size_t c = next; c < m.cols(); ++c) {
        if (m.at(r, c).is_zero()) continue;
        if (c1 == m.cols() || m.at(r, c).degree() < m.at(r, c1).degree()) {
          c2 = c1;
          c1 = c;
        } else if (c2 == m.cols() || m.at(r, c).degree() < m.at(r, c2).degree()) {
          c2 = c;
        }
      }
      if (c2 == m.cols()) {
        if (c1 == m.cols()) break;  // row empty among active columns
        // single survivor: promote to pivot
        col_swap(m, next, c1);
        col_swap(v, next, c1);
        uint16_t f = inv_mod(m.at(r, next).leading(), m.modulus());
        col_scale(m, next, f);
        col_scale(v, next, f);
        // reduce this pivot row across the already-fixed columns
        for (size_t c = 0; c < next; ++c) {
          if (m.at(r, c).is_zero()) continue;
          UPoly q = m.at(r, c).divmod(m.at(r, next)).first;
          if (q.is_zero()) continue;
          col_axpy(m, c, next, q);
          col_axpy(v, c, next, q);
        }
        hf.pivot_row.push_back(r);
        ++next;
        break;
      }
      UPoly q = m.at(r, c2).divmod(m.at(r, c1)).first;
      col_axpy(m, c2, c1, q);
      col_axpy(v, c2, c1, q);
    }
  }
  hf.rank = next;
  hf.h = std::move(m);
  hf.v = std::move(v);
  return hf;
}

UPolyMat pid_kernel(const UPolyMat& m) {
  HermiteForm hf = column_hermite(m);
  size_t kdim = m.cols() - hf.rank;
  UPolyMat raw(m.cols(), kdim, m.modulus());
  for (size_t j = 0; j < kdim; ++j)
    for (size_t r = 0; r < m.cols(); ++r) raw.at(r, j) = hf.v.at(r, hf.rank + j);
  // canonicalize the basis itself
  HermiteForm khf = column_hermite(raw);
  UPolyMat out(m.cols(), kdim, m.modulus());
  for (size_t j = 0; j < kdim; ++j)
    for (size_t r = 0; r < m.cols(); ++r) out.at(r, j) = khf.h.at(r, j);
  return out;
}

std::optional<std::vector<UPoly>> pid_solve(const UPolyMat& m, const std::vector<UPoly>& b) {
  if (b.size() != m.rows()) fail(ErrorKind::Dimension, "rhs length mismatch");
  HermiteForm hf = column_hermite(m);
  std::vector<UPoly> residual = b;
  std::vector<UPoly> q(m.cols(), UPoly(m.modulus()));
  for (size_t c = 0; c < hf.rank; ++c) {
    size_t r = hf.pivot_row[c];
    if (residual[r].is_zero()) continue;
    UPoly quo;
    if (!residual[r].divisible_by(hf.h.at(r, c), &quo)) return std::nullopt;
    q[c] = quo;
    for (size_t i = 0; i < m.rows(); ++i)
      residual[i] = residual[i] - quo * hf.h.at(i, c);
  }
  for (const auto& e : residual)
    if (!e.is_zero()) return std::nullopt;
  // x = V * q
  std::vector<UPoly> x(m.cols(), UPoly(m.modulus()));
  for (size_t r = 0; r < m.cols(); ++r)
    for (size_t c = 0; c < hf.rank; ++c)
      if (!q[c].is_zero()) x[r] = x[r] + hf.v.at(r, c) * q[c];
  return x;
}

bool same_column_module(const UPolyMat& a, const UPolyMat& b) {
  if (a.rows() != b.rows() || a.modulus() != b.modulus()) return false;
  HermiteForm ha = column_hermite(a), hb = column_hermite(b);
  if (ha.rank != hb.rank || ha.pivot_row != hb.pivot_row) return false;
  for (size_t c = 0; c < ha.rank; ++c)
    for (size_t r = 0; r < a.rows(); ++r)
      if (!(ha.h.at(r, c) == hb.h.at(r, c))) return false;
  return true;
}

}  // namespace strat
