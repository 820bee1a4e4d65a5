#ifndef STRAT_CONNECTION_HPP
#define STRAT_CONNECTION_HPP

#include <optional>
#include <vector>

#include "strat/polymat.hpp"

namespace strat {

// A connection on a free module of rank r over F_p[fiber_vars, base_vars]:
// nabla(d/dx_i) = d/dx_i + A_i acting on column vectors.  Base variables are
// never differentiated; they make the connection relative.
struct Connection {
  uint16_t p = 2;
  std::vector<std::string> fiber_vars;
  std::vector<std::string> base_vars;
  size_t rank = 0;
  std::vector<PolyMat> matrices;  // one A_i per fiber variable

  std::vector<std::string> vars() const;
  static Connection trivial(uint16_t p, std::vector<std::string> fiber_vars,
                            std::vector<std::string> base_vars, size_t rank);
};

// A horizontal frame: square matrix with nonzero constant determinant whose
// columns generate the kernel of the connection over the twisted subring
// F_p[x^p for fiber][base].
struct Frame {
  uint16_t p = 2;
  std::vector<std::string> fiber_vars;
  std::vector<std::string> base_vars;
  PolyMat matrix;
  Fp det_value;

  std::vector<std::string> vars() const;
};

struct DescentOptions {
  // Hard cap for the iterative deepening of the kernel degree.  Defaults to
  // 4 * (1 + max entry degree); there is no effective bound in general, so
  // hitting the cap is reported as inconclusive, never as a disproof.
  std::optional<uint32_t> max_degree;
};

uint32_t default_descent_cap(const Connection& c);

// (d/dx_i + A_i) v
std::vector<Poly> connection_apply(const Connection& c, size_t fiber_index,
                                   const std::vector<Poly>& v);

// Integrability: d_i(A_j) + A_i A_j == d_j(A_i) + A_j A_i for all i < j.
bool is_flat(const Connection& c);

// Matrix of nabla(d/dx_i)^p per fiber variable; O-linear because d^p = 0 on
// polynomials.  Integrability error on non-flat input.
std::vector<PolyMat> p_curvature(const Connection& c);

// A'_i = H^{-1} (A_i H + d_i H); H must have unit determinant.
Connection gauge_transform(const Connection& c, const PolyMat& h);

// Kernel frame of a flat, p-curvature-zero connection; Flatness error when
// the p-curvature is nonzero, DegreeBound when no unit frame shows up within
// the cap.
Frame cartier_descent(const Connection& c, const DescentOptions& opts = {});

// Canonical connection killing the frame columns: A_i = -d_i(G) G^{-1}.
Connection frobenius_pullback(const Frame& f, size_t downstairs_rank);

// Same descent data up to a unit of the twisted subring:
// b^{-1} a has twisted entries and constant nonzero determinant.
bool frames_equivalent(const Frame& a, const Frame& b);

// Shared with the tower layer: pick unit-determinant generators over the
// twisted subring out of an F_p-basis of horizontal vectors.  Returns nullopt
// when no unit frame is found at this truncation.
std::optional<PolyMat> extract_frame(const std::vector<std::vector<Poly>>& kernel_basis,
                                     size_t rank, uint16_t p,
                                     const std::vector<std::string>& ring_vars,
                                     const std::vector<std::string>& twist_vars);

}  // namespace strat

#endif  // STRAT_CONNECTION_HPP
