#ifndef STRAT_GAUSSMANIN_HPP
#define STRAT_GAUSSMANIN_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "strat/pidlinalg.hpp"
#include "strat/tower.hpp"

namespace strat {

// Fiber/base split of the variables of an absolute tower on a product
// A^k x A^1.  The pushforward needs exactly one base variable so that the
// coefficient ring F_p[s] stays a principal-ideal ring; fiber scans work for
// any number of base variables.
struct RelativeSplit {
  std::vector<std::string> fiber_vars;
  std::vector<std::string> base_vars;

  static RelativeSplit of(const Tower& t);  // the tower's own partition
};

// Truncated relative horizontal sections as a module over R = F_p[s]:
// generators form a basis of a free module, presented by the canonical
// Hermite-reduced coefficient matrix (rows = (fiber monomial, component),
// columns = generators).  Same input always yields a bit-identical matrix.
struct RelativeH0 {
  size_t level = 0;
  uint32_t degree_cap = 0;  // on fiber degree only
  std::vector<std::string> fiber_vars;
  std::vector<std::string> base_vars;
  std::vector<std::string> ring_vars;     // ambient ring of the tower
  size_t ambient_rank = 0;
  std::vector<MultiIndex> fiber_mons;     // grlex ascending, degree <= cap
  UPolyMat coeffs;                        // (mons x rank) rows, gens as columns
  std::vector<std::vector<Poly>> generators;  // ambient polynomial columns

  size_t rank() const { return coeffs.cols(); }
};

RelativeH0 relative_h0(const Tower& t, const RelativeSplit& split, size_t level,
                       uint32_t degree_cap);

// Matrix over F_p[s] expressing the action of the base-direction operator
// D_{n_s} (through the coordinate lift of the base derivation) on the
// generator basis.  Closure error when the image leaves the truncated module.
UPolyMat tau_action(const Tower& t, const RelativeSplit& split, const RelativeH0& module,
                    uint64_t n_s);

// The 0-th pushforward: a tower on the base variable, plus the embedding of
// its generators inside the ambient bundle.
struct GmResult {
  Tower gm;                                   // absolute tower on the base var
  std::vector<std::vector<Poly>> embedding;   // generator columns, ambient ring
  RelativeH0 module;                          // the level-`level` module
  std::vector<size_t> ranks;                  // relative ranks at levels 1..L
  bool stabilized = false;                    // two equal consecutive ranks
  size_t stabilized_at = 0;                   // first level with stable rank
  size_t level = 0;
  uint32_t degree_cap = 0;
};

GmResult gm_pushforward(const Tower& t, const RelativeSplit& split, size_t level,
                        uint32_t degree_cap, const DescentOptions& opts = {});

// Substitute the base variables at a rational point; the result is an
// absolute tower on the fiber variables.  Uniform substitution across levels
// is exact because c^p = c in F_p.
Tower fiber_restrict(const Tower& t, const RelativeSplit& split,
                     const std::vector<uint16_t>& point);

struct ScanRow {
  std::vector<uint16_t> point;
  size_t dimension;
};

// dim truncated_h0 of every fiber over F_p-points, points ascending.
std::vector<ScanRow> h0_fiber_scan(const Tower& t, const RelativeSplit& split, size_t level,
                                   uint32_t degree_cap);

struct BaseChangePoint {
  uint16_t point;
  size_t gm_dim;     // F_p-span of the evaluated generators
  size_t fiber_dim;  // truncated h0 of the fiber
  bool equal;
};

struct BaseChangeReport {
  bool stabilized = false;
  size_t gm_rank = 0;
  std::vector<BaseChangePoint> points;
  bool all_equal = false;
  // set when unequal anywhere or the rank never stabilized; equality failures
  // downgrade the stabilization claim instead of contradicting it
  bool inconclusive = false;
  std::string note;
};

BaseChangeReport base_change_check(const Tower& t, const RelativeSplit& split, size_t level,
                                   uint32_t degree_cap, const DescentOptions& opts = {});

struct MaxSubPoint {
  uint16_t point;
  bool equal;  // module spans agree in both directions
  size_t sub_rank;
  size_t fiber_dim;
};

struct MaxSubResult {
  GmResult gm;
  std::vector<MaxSubPoint> points;
  bool all_equal = false;
};

// The maximal subbundle pulled back from the base: the pushforward plus the
// fiberwise comparison of its evaluated generators with the maximal trivial
// subobject of each fiber.
MaxSubResult maximal_pullback_sub(const Tower& t, const RelativeSplit& split, size_t level,
                                  uint32_t degree_cap, const DescentOptions& opts = {});

// Disjoint-variable product: Kronecker transitions on the union ring.
Tower external_product(const Tower& a, const Tower& b);

// v in the O-span of the generators, with coefficient degrees capped.
bool in_poly_span(const std::vector<Poly>& v, const std::vector<std::vector<Poly>>& gens,
                  uint32_t coeff_degree_cap);

}  // namespace strat

#endif  // STRAT_GAUSSMANIN_HPP
