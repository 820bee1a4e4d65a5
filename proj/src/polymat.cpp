#include "strat/polymat.hpp"

#include <algorithm>

#include "strat/errors.hpp"

namespace strat {

PolyMat::PolyMat(size_t rows, size_t cols, uint16_t p, std::vector<std::string> vars)
    : rows_(rows), cols_(cols), p_(p), vars_(std::move(vars)),
      a_(rows * cols, Poly(p, vars_)) {}

PolyMat PolyMat::identity(size_t n, uint16_t p, std::vector<std::string> vars) {
  PolyMat m(n, n, p, std::move(vars));
  for (size_t i = 0; i < n; ++i) m.at(i, i) = Poly::constant(p, m.vars_, 1);
  return m;
}

PolyMat PolyMat::operator+(const PolyMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorKind::Dimension, "matrix shape mismatch");
  PolyMat r(rows_, cols_, p_, vars_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

PolyMat PolyMat::operator-(const PolyMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorKind::Dimension, "matrix shape mismatch");
  PolyMat r(rows_, cols_, p_, vars_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

PolyMat PolyMat::operator*(const PolyMat& o) const {
  if (cols_ != o.rows_) fail(ErrorKind::Dimension, "matrix product shape mismatch");
  PolyMat r(rows_, o.cols_, p_, vars_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      if (at(i, k).is_zero()) continue;
      for (size_t j = 0; j < o.cols_; ++j)
        r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
    }
  return r;
}

std::vector<Poly> PolyMat::operator*(const std::vector<Poly>& v) const {
  if (cols_ != v.size()) fail(ErrorKind::Dimension, "matrix-vector shape mismatch");
  std::vector<Poly> r(rows_, Poly(p_, vars_));
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k)
      if (!at(i, k).is_zero()) r[i] = r[i] + at(i, k) * v[k];
  return r;
}

PolyMat PolyMat::transpose() const {
  PolyMat r(cols_, rows_, p_, vars_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

PolyMat PolyMat::map(const std::function<Poly(const Poly&)>& f) const {
  PolyMat r = *this;
  for (auto& e : r.a_) e = f(e);
  return r;
}

Poly PolyMat::minor_det(const std::vector<size_t>& rows, const std::vector<size_t>& cols) const {
  if (rows.empty()) return Poly::constant(p_, vars_, 1);
  Poly acc(p_, vars_);
  for (size_t k = 0; k < cols.size(); ++k) {
    const Poly& e = at(rows[0], cols[k]);
    if (e.is_zero()) continue;
    std::vector<size_t> sub_rows(rows.begin() + 1, rows.end());
    std::vector<size_t> sub_cols;
    for (size_t j = 0; j < cols.size(); ++j)
      if (j != k) sub_cols.push_back(cols[j]);
    Poly term = e * minor_det(sub_rows, sub_cols);
    acc = (k % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

Poly PolyMat::det() const {
  if (rows_ != cols_) fail(ErrorKind::Dimension, "determinant of a non-square matrix");
  std::vector<size_t> idx(rows_);
  for (size_t i = 0; i < rows_; ++i) idx[i] = i;
  return minor_det(idx, idx);
}

PolyMat PolyMat::adjugate() const {
  if (rows_ != cols_) fail(ErrorKind::Dimension, "adjugate of a non-square matrix");
  PolyMat r(rows_, cols_, p_, vars_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) {
      std::vector<size_t> rs, cs;
      for (size_t k = 0; k < rows_; ++k)
        if (k != i) rs.push_back(k);
      for (size_t k = 0; k < cols_; ++k)
        if (k != j) cs.push_back(k);
      Poly m = minor_det(rs, cs);
      r.at(j, i) = ((i + j) % 2 == 0) ? m : -m;  // cofactor transpose
    }
  return r;
}

PolyMat PolyMat::inverse_unit() const {
  Poly d = det();
  if (!d.is_constant() || d.is_zero())
    fail(ErrorKind::Invertibility,
         "determinant '" + d.str() + "' is not a nonzero constant");
  uint16_t dv = d.constant_value();
  Fp inv = Fp(dv, p_).inv();
  return adjugate().map([&](const Poly& e) { return e.scaled(inv.value()); });
}

bool PolyMat::is_identity() const {
  if (rows_ != cols_) return false;
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) {
      const Poly& e = at(i, j);
      if (i == j ? !(e.is_constant() && e.constant_value() == 1) : !e.is_zero()) return false;
    }
  return true;
}

bool PolyMat::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Poly& e) { return e.is_zero(); });
}

int PolyMat::max_degree() const {
  int d = -1;
  for (const auto& e : a_) d = std::max(d, e.total_degree());
  return d;
}

PolyMat PolyMat::kronecker(const PolyMat& o) const {
  PolyMat r(rows_ * o.rows_, cols_ * o.cols_, p_, vars_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) {
      if (at(i, j).is_zero()) continue;
      for (size_t k = 0; k < o.rows_; ++k)
        for (size_t l = 0; l < o.cols_; ++l)
          r.at(i * o.rows_ + k, j * o.cols_ + l) = at(i, j) * o.at(k, l);
    }
  return r;
}

PolyMat PolyMat::with_vars(const std::vector<std::string>& new_vars) const {
  PolyMat r(rows_, cols_, p_, new_vars);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i].with_vars(new_vars);
  return r;
}

PolyMat PolyMat::frobenius(const std::vector<std::string>& twist_vars) const {
  return map([&](const Poly& e) { return e.frobenius(twist_vars); });
}

}  // namespace strat
