#ifndef STRAT_POLYMAT_HPP
#define STRAT_POLYMAT_HPP

#include <functional>
#include <vector>

#include "strat/poly.hpp"

namespace strat {

// Dense matrix of multivariate polynomials.  Ranks stay tiny (Kronecker
// products of rank <= 3), so determinants and adjugates use plain Laplace
// expansion.  Inversion is only defined for unit (nonzero constant)
// determinants: adjugate divided by the constant.
class PolyMat {
 public:
  PolyMat() : rows_(0), cols_(0) {}
  PolyMat(size_t rows, size_t cols, uint16_t p, std::vector<std::string> vars);
  static PolyMat identity(size_t n, uint16_t p, std::vector<std::string> vars);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  uint16_t modulus() const { return p_; }
  const std::vector<std::string>& vars() const { return vars_; }

  const Poly& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }
  Poly& at(size_t r, size_t c) { return a_[r * cols_ + c]; }

  PolyMat operator+(const PolyMat& o) const;
  PolyMat operator-(const PolyMat& o) const;
  PolyMat operator*(const PolyMat& o) const;
  std::vector<Poly> operator*(const std::vector<Poly>& v) const;
  PolyMat transpose() const;
  PolyMat map(const std::function<Poly(const Poly&)>& f) const;

  Poly det() const;
  PolyMat adjugate() const;
  // Requires det to be a nonzero constant; Invertibility error otherwise.
  PolyMat inverse_unit() const;
  bool is_identity() const;
  bool is_zero() const;
  int max_degree() const;  // max total degree of entries, -1 if all zero

  PolyMat kronecker(const PolyMat& o) const;
  PolyMat with_vars(const std::vector<std::string>& new_vars) const;
  PolyMat frobenius(const std::vector<std::string>& twist_vars) const;

  friend bool operator==(const PolyMat& x, const PolyMat& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }
  friend bool operator!=(const PolyMat& x, const PolyMat& y) { return !(x == y); }

 private:
  Poly minor_det(const std::vector<size_t>& rows, const std::vector<size_t>& cols) const;

  size_t rows_, cols_;
  uint16_t p_ = 2;
  std::vector<std::string> vars_;
  std::vector<Poly> a_;
};

}  // namespace strat

#endif  // STRAT_POLYMAT_HPP
