#ifndef STRAT_LINALG_HPP
#define STRAT_LINALG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "strat/errors.hpp"

namespace strat {

using FpRow = std::vector<uint16_t>;

// Incremental reduced-row-echelon accumulator over F_p.  Equations are fed
// one at a time; pivot rows are kept fully reduced, keyed by pivot column.
// All heavy row updates go through the kernels layer.
class RrefAccumulator {
 public:
  RrefAccumulator(size_t ncols, uint16_t p) : ncols_(ncols), p_(p) {}

  // Reduces the row against the current pivots and inserts it when nonzero.
  // Returns true when the row added a new pivot.
  bool add_row(FpRow row);

  size_t rank() const { return pivots_.size(); }
  size_t ncols() const { return ncols_; }
  uint16_t modulus() const { return p_; }
  const std::map<size_t, FpRow>& pivot_rows() const { return pivots_; }
  bool has_pivot(size_t col) const { return pivots_.count(col) != 0; }

  // Canonical kernel basis: one vector per free column, unit at the free
  // column, ordered by free column ascending.
  std::vector<FpRow> kernel_basis() const;

 private:
  size_t ncols_;
  uint16_t p_;
  std::map<size_t, FpRow> pivots_;
};

// Kernel of the matrix whose rows are `rows` (each of width ncols).
std::vector<FpRow> nullspace(const std::vector<FpRow>& rows, size_t ncols, uint16_t p);

size_t rank(const std::vector<FpRow>& rows, size_t ncols, uint16_t p);

// One solution of A x = b (rows of A in `rows`), or nullopt when inconsistent.
// Free variables are set to zero, so the output is deterministic.
std::optional<FpRow> solve(const std::vector<FpRow>& rows, const FpRow& b, size_t ncols,
                           uint16_t p);

// Row-span equality of two families of vectors of width ncols.
bool same_span(const std::vector<FpRow>& a, const std::vector<FpRow>& b, size_t ncols,
               uint16_t p);

}  // namespace strat

#endif  // STRAT_LINALG_HPP
