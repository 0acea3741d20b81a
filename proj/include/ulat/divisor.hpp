#pragma once
/*
 * Special divisors on the blown-up model and their intersection theory.
 *
 * The divisor Z(b) of a nonzero vector b with q(b) in O_{F0} decomposes
 * into irreducible components of three kinds:
 *
 *   PLine(L2)       the projective line over a type-2 vertex lattice,
 *                   with multiplicity n(b, L2) when n(b, L2) >= 1;
 *   Exc(L0)         the exceptional curve over a type-0 edge lattice,
 *                   with multiplicity n(b, L0) + 1 when n(b, L0) >= 0;
 *   Horizontal(b)   the horizontal curve through the anchor lambda_b(b),
 *                   present exactly when q(b) != 0, with multiplicity 1.
 *
 * When q(b) is not integral the divisor is zero; when q(b) = 0 the
 * vertical support is an infinite cone and is never materialized here.
 *
 * Irreducible components pair by the table (all other combinations are 0):
 *
 *   PLine(L) . PLine(L)      = -(q+1)
 *   Exc(L0) . Exc(L0)        = -2
 *   Exc(L0) . PLine(L2)      = 1   iff L0 is contained in L2
 *   Exc(L0) . Horizontal(b)  = 1   iff L0 = lambda_b(b)
 *   PLine . Horizontal       = 0
 *   Horizontal . Horizontal  = 0 for orthogonal vectors; non-orthogonal
 *                              horizontal pairs are not supported.
 *
 * cycle_pairing pairs one component against the full divisor Z(b):
 *
 *   PLine(L2) . Z(b)       = 1    iff b in L2,
 *   Exc(L0) . Z(b)         = -1   iff b in L0,
 *   Horizontal(b1) . Z(b)  = n(b, lambda_b(b1)) + 1   for (b1, b) = 0.
 *
 * The first value is forced by the edge-sum identity
 * sum_{L0 at L2} (n(b,L0) + 1 - n(b,L2)) = 1, the second by the fact that
 * the unique edge at an endpoint of the anchor of b realizing the equal-n
 * case is the anchor itself.  Summing multiplicity times cycle_pairing
 * over a decomposition of one side reproduces tree_intersection, and
 * intersect_closed gives the same numbers as a function of the congruence
 * class alone.
 */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ulat/herm.hpp"
#include "ulat/tree.hpp"

namespace ulat {

struct UnsupportedPairing : std::runtime_error {
  explicit UnsupportedPairing(const std::string& what) : std::runtime_error(what) {}
};

/// An irreducible component of a special divisor.
struct Component {
  enum Kind { PLine, Exc, Horizontal } kind;
  Lattice lat;              // PLine: type-2 vertex; Exc: type-0 edge;
                            // Horizontal: the anchor lambda_b(vec)
  std::optional<Vec2> vec;  // Horizontal only
};

/// A divisor as a list of components with nonzero multiplicities.
struct Divisor {
  std::vector<std::pair<Component, int64_t>> terms;
};

/// Decompose Z(b).  Returns the empty divisor when q(b) is not integral;
/// throws RegionExceeded when the vertical support cannot be enumerated
/// within the budget (in particular always for isotropic b, whose support
/// is an infinite cone), InvalidInput for b = 0.
Divisor decompose(const Vec2& b, const TreeBudget& budget = {});

/// The pairing table of two irreducible components (see header comment).
/// Throws UnsupportedPairing for horizontal components with
/// non-orthogonal vectors.
int64_t component_pairing(const Component& c1, const Component& c2);

/// Pairing of one component against the full divisor Z(b) in closed form
/// (see header comment).  Z(b) = 0 when q(b) is not integral, so the
/// horizontal case returns 0 then; throws UnsupportedPairing when the
/// horizontal case is invoked with (b1, b) != 0, InvalidInput for b = 0.
int64_t cycle_pairing(const Component& c, const Vec2& b);

enum class HermSpace { Split, Nonsplit };

/// Closed-form intersection numbers as a function of the congruence class
/// alone.  Non-integral classes give 0.
///
/// Split plane:
///   Diagonal(a, b, +1):  a + b - 2 sum_{e=1}^{a} q^e
///   Diagonal(., ., -1):  throws NotRepresentable (no such pair exists)
///   AntiDiagonal(n):     -(q+1) sum_{e=0}^{r-1} q^e + n + 1,  r = (n+1)/2
///
/// Nonsplit plane (reference values; no tree engine behind them):
///   Diagonal(a, b, .):   2 sum_{s=0}^{a} q^s (a + b + 1 - 2s) - a - b - 2
///                        (independent of eps1)
///   AntiDiagonal:        throws InvalidClass (such classes arise only in
///                        the split plane)
int64_t intersect_closed(const TClass& cls, int64_t q, HermSpace space);

}  // namespace ulat
