#ifndef STRAT_TOWER_HPP
#define STRAT_TOWER_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strat/connection.hpp"

namespace strat {

enum class TowerMode { Absolute, Relative };

const char* mode_name(TowerMode m);
std::optional<TowerMode> mode_from_name(const std::string& s);

// A stratified bundle presented as a Frobenius tower: ranks plus transition
// matrices S_0 ... S_{l-1} with constant nonzero determinant, S_i giving the
// descent isomorphism between level i+1 and level i in chosen bases.  Level-i
// matrices are stored untwisted; all twisting happens in the composite-frame
// formula
//   G_l = S_0 . F(S_1) . F^2(S_2) ... F^{l-1}(S_{l-1}),
// where F raises the twisted variables to their p-th powers: every variable
// for absolute towers, the fiber variables only for relative ones.
struct Tower {
  uint16_t p = 2;
  std::vector<std::string> fiber_vars;
  std::vector<std::string> base_vars;
  TowerMode mode = TowerMode::Absolute;
  size_t rank = 0;
  std::vector<PolyMat> sigmas;

  size_t length() const { return sigmas.size(); }
  std::vector<std::string> vars() const;         // fiber then base
  std::vector<std::string> active_vars() const;  // differentiated variables
  static Tower identity(uint16_t p, std::vector<std::string> fiber_vars,
                        std::vector<std::string> base_vars, TowerMode mode, size_t rank,
                        size_t length);
  // The tensor unit: rank one, identity transitions.
  static Tower unit(uint16_t p, std::vector<std::string> fiber_vars,
                    std::vector<std::string> base_vars, TowerMode mode, size_t length);
};

struct ValidationCheck {
  std::string name;
  bool ok;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  std::string first_failure() const;
};

ValidationReport validate(const Tower& t);
void require_valid(const Tower& t);  // Validation error naming the offending sigma

PolyMat composite_frame(const Tower& t);

// Action matrix of the divided-power operator D_n on the standard basis:
// G . D_n(G^{-1}).  n indexes the active variables; |n| < p^length.
PolyMat action_matrix(const Tower& t, const MultiIndex& n);

// nabla(D_n)(v) = G . D_n(G^{-1} v); LevelExceeded beyond the truncation.
std::vector<Poly> stratified_action(const Tower& t, const MultiIndex& n,
                                    const std::vector<Poly>& v);

// Bulk variant sharing one frame inversion across many indices.
std::map<MultiIndex, PolyMat, GrlexLess> action_matrices(const Tower& t,
                                                         const std::vector<MultiIndex>& indices);

// A_i = -d_i(S_0) . S_0^{-1} on the active variables.
Connection level1_connection(const Tower& t);

// Truncated horizontal sections: all v with deg(v) <= degree_cap killed by
// every nabla(D_n), 0 < |n| < p^level.  The basis is the canonical reduced
// echelon kernel basis with respect to graded-lex column order.
struct TruncatedH0 {
  size_t level = 0;
  uint32_t degree_cap = 0;
  std::vector<std::vector<Poly>> basis;
  size_t dimension() const { return basis.size(); }
};

TruncatedH0 truncated_h0(const Tower& t, size_t level, uint32_t degree_cap);

// A level-truncated stratification presented by its action matrices on the
// standard basis of a free module: index b (over `vars`) maps to the matrix
// of nabla(D_b), for 0 < |b| < p^levels.  The intermediate object of the
// tower <-> stratification conversions.
struct MatrixStratification {
  uint16_t p = 2;
  std::vector<std::string> vars;     // differentiated variables
  std::vector<std::string> passive;  // coefficient-only variables
  size_t rank = 0;
  size_t levels = 0;
  std::map<MultiIndex, PolyMat, GrlexLess> action;

  std::vector<std::string> ring_vars() const;
};

// Rebuild the tower level by level: descend the level-one connection, push
// the higher action through the frame, check that it lands in the twisted
// subring (Obstruction naming the level when not), untwist, recurse.
Tower tower_from_stratification(const MatrixStratification& ms, const DescentOptions& opts = {});

// The action matrices of a tower, untwisted presentation, all 0 < |b| < bound.
MatrixStratification stratification_of(const Tower& t, size_t levels);

// Iterated Cartier descent of a flat, p-curvature-zero connection, extended
// canonically above level one (the descent coordinates carry the entrywise
// action).  Obstruction / DegreeBound errors name the failing level.
Tower descend_tower(const Connection& c, size_t levels, const DescentOptions& opts = {});

// Tensor-category structure: Kronecker transitions, adjugate-transpose duals.
Tower tensor(const Tower& a, const Tower& b);
Tower dual(const Tower& a);

// Chain of unit-determinant intertwiners h_0..h_l with
//   h_i . S_i(first) = S_i(second) . F(h_{i+1});
// bounded search, absence within bounds is inconclusive rather than a proof.
struct GaugeChain {
  std::vector<PolyMat> h;
};

std::optional<GaugeChain> gauge_equivalent(const Tower& a, const Tower& b, uint32_t max_degree);

}  // namespace strat

#endif  // STRAT_TOWER_HPP
