#ifndef STRAT_PIDLINALG_HPP
#define STRAT_PIDLINALG_HPP

#include <optional>
#include <vector>

#include "strat/upoly.hpp"

namespace strat {

// Matrices over the principal-ideal ring F_p[s].  Everything the pushforward
// needs reduces to column Hermite forms: kernels, membership, and canonical
// generator presentations.  Column operations are unimodular throughout.
class UPolyMat {
 public:
  UPolyMat() : rows_(0), cols_(0), p_(2) {}
  UPolyMat(size_t rows, size_t cols, uint16_t p)
      : rows_(rows), cols_(cols), p_(p), a_(rows * cols, UPoly(p)) {}
  static UPolyMat identity(size_t n, uint16_t p);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  uint16_t modulus() const { return p_; }

  const UPoly& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }
  UPoly& at(size_t r, size_t c) { return a_[r * cols_ + c]; }

  UPolyMat operator*(const UPolyMat& o) const;
  bool is_zero_col(size_t c) const;

  friend bool operator==(const UPolyMat& x, const UPolyMat& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.p_ == y.p_ && x.a_ == y.a_;
  }

 private:
  size_t rows_, cols_;
  uint16_t p_;
  std::vector<UPoly> a_;
};

struct HermiteForm {
  UPolyMat h;                   // M * v = h, column staircase, monic pivots
  UPolyMat v;                   // unimodular
  std::vector<size_t> pivot_row;  // per pivot column 0..rank-1
  size_t rank = 0;
};

// Column Hermite normal form: pivot rows strictly increase over the first
// `rank` columns, pivots are monic, and entries of earlier columns in a pivot
// row are reduced to lower degree.  Deterministic.
HermiteForm column_hermite(UPolyMat m);

// Canonical basis of { x : M x = 0 } as columns.  The kernel of a matrix over
// a PID is a free, saturated submodule; the basis is itself Hermite-reduced so
// equal modules give bit-identical answers.
UPolyMat pid_kernel(const UPolyMat& m);

// One solution of M x = b over F_p[s], or nullopt when none exists over the
// ring (divisibility failures included).
std::optional<std::vector<UPoly>> pid_solve(const UPolyMat& m, const std::vector<UPoly>& b);

// Same column span as modules?  (Compares Hermite forms.)
bool same_column_module(const UPolyMat& a, const UPolyMat& b);

}  // namespace strat

#endif  // STRAT_PIDLINALG_HPP
