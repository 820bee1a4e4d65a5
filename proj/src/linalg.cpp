#include "strat/linalg.hpp"

#include <algorithm>

#include "strat/kernels.hpp"

namespace strat {

namespace {

uint16_t inv_mod(uint16_t a, uint16_t p) {
  // p prime and tiny; plain exponentiation
  uint32_t r = 1, b = a, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<uint16_t>(r);
}

size_t first_nonzero(const FpRow& row, size_t from = 0) {
  for (size_t i = from; i < row.size(); ++i)
    if (row[i]) return i;
  return row.size();
}

}  // namespace

bool RrefAccumulator::add_row(FpRow row) {
  if (row.size() != ncols_) fail(ErrorKind::Dimension, "row width mismatch");
  // Pivot rows are fully reduced against each other, so one pass clears
  // every pivot column from the incoming row.
  for (const auto& [col, prow] : pivots_) {
    if (row[col])
      kernels::axpy_mod(row.data(), prow.data(), static_cast<uint16_t>(p_ - row[col]), ncols_,
                        p_);
  }
  size_t lead = first_nonzero(row);
  if (lead == ncols_) return false;
  if (row[lead] != 1)
    kernels::scale_mod(row.data(), inv_mod(row[lead], p_), ncols_, p_);
  // keep the stored rows reduced against the new one
  for (auto& [col, prow] : pivots_) {
    if (prow[lead])
      kernels::axpy_mod(prow.data(), row.data(), static_cast<uint16_t>(p_ - prow[lead]),
                        ncols_, p_);
  }
  pivots_.emplace(lead, std::move(row));
  return true;
}

std::vector<FpRow> RrefAccumulator::kernel_basis() const {
  std::vector<FpRow> basis;
  for (size_t j = 0; j < ncols_; ++j) {
    if (pivots_.count(j)) continue;
    FpRow v(ncols_, 0);
    v[j] = 1;
    for (const auto& [col, row] : pivots_)
      if (row[j]) v[col] = static_cast<uint16_t>(p_ - row[j]);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<FpRow> nullspace(const std::vector<FpRow>& rows, size_t ncols, uint16_t p) {
  RrefAccumulator acc(ncols, p);
  for (const auto& r : rows) acc.add_row(r);
  return acc.kernel_basis();
}

size_t rank(const std::vector<FpRow>& rows, size_t ncols, uint16_t p) {
  RrefAccumulator acc(ncols, p);
  for (const auto& r : rows) acc.add_row(r);
  return acc.rank();
}

std::optional<FpRow> solve(const std::vector<FpRow>& rows, const FpRow& b, size_t ncols,
                           uint16_t p) {
  // Augment with b as the last column; a pivot there means inconsistent.
  RrefAccumulator acc(ncols + 1, p);
  for (size_t i = 0; i < rows.size(); ++i) {
    FpRow r = rows[i];
    r.push_back(i < b.size() ? b[i] : 0);
    acc.add_row(std::move(r));
  }
  if (acc.has_pivot(ncols)) return std::nullopt;
  FpRow x(ncols, 0);
  for (const auto& [col, row] : acc.pivot_rows()) x[col] = row[ncols];
  return x;
}

bool same_span(const std::vector<FpRow>& a, const std::vector<FpRow>& b, size_t ncols,
               uint16_t p) {
  RrefAccumulator ra(ncols, p), rb(ncols, p);
  for (const auto& r : a) ra.add_row(r);
  for (const auto& r : b) rb.add_row(r);
  if (ra.rank() != rb.rank()) return false;
  return ra.pivot_rows() == rb.pivot_rows();
}

}  // namespace strat
