#pragma once
/*
 * The Bruhat-Tits tree of vertex lattices in the split Hermitian plane C.
 *
 * A lattice L with Gram matrix G (in any basis) is a vertex lattice when
 * pi*G is integral and det G has pi-adic valuation 0 (type 0, self-dual,
 * L = L^sharp) or -2 (type 2, L^sharp = pi L).  Type-2 lattices form a
 * (q+1)-regular tree (q = p here): two of them are adjacent when their
 * intersection is a type-0 lattice, and every type-0 lattice arises this
 * way from exactly one adjacent pair.  We therefore treat type-2 lattices
 * as the vertices and type-0 lattices as the edges.
 *
 * Every type-2 lattice admits a basis (b, b') with Gram exactly
 * pi^{-1} [[0, 1], [-1, 0]]; in such a normalized basis its q+1 neighbors
 * are
 *     L_inf = < pi b', pi^{-1} b >,
 *     L_k   = < pi^{-1}(k b + b'), pi b >,  k = 0 .. p-1,
 * all of them again normalized, with connecting edges
 *     L cap L_inf = < b, pi b' >,   L cap L_k = < pi b, k b + b' >.
 *
 * For a nonzero vector x and a lattice L, n(x, L) is the largest n with
 * x in pi^n L.  Key facts used throughout:
 *   - n(x, L cap L') = min(n(x, L), n(x, L')) for adjacent L, L';
 *   - adjacent vertices satisfy |n(x, L) - n(x, L')| <= 1;
 *   - the support T(x) = { vertices L : n(x, L) >= 0 } is a finite ball
 *     when q(x) != 0, with 2 * sum_{i<=a} q^i type-2 members for
 *     val_pi q(x) = 2a;
 *   - sum over the q+1 edges at any vertex L of
 *     (n(x, edge) + 1 - n(x, L)) equals 1.
 *
 * For anisotropic x, lambda_b(x) is the unique type-0 lattice of the form
 * O c1 + O c with c1 = pi^{-a} x, q(c1) and q(c) units and c1 orthogonal
 * to c.  Its two endpoints are recovered by hyperbolizing the orthogonal
 * unit basis: with s = sqrt(-q(c1)/q(c)) in Z_p (a unit square because the
 * ambient plane is split), w0' = c1 + s c and w1' = (c1 - s c)/(2 q(c1))
 * satisfy Gram [[0,1],[1,0]] and span the same lattice.
 */

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ulat/herm.hpp"

namespace ulat {

struct RegionExceeded : std::runtime_error {
  explicit RegionExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct TreeBudget {
  int64_t max_nodes = 100000;
  int64_t max_radius = -1;  // -1: choose from the input valuations
};

enum class VertexType { Type0, Type2, NotVertex };

VertexType vertex_type(const Lattice& L);

/// Re-basis a type-2 lattice so its Gram is exactly pi^{-1}[[0,1],[-1,0]].
/// Throws InvalidInput if L is not type 2.
Lattice normalize_type2(const Lattice& L);

/// The q+1 neighbors of a normalized type-2 lattice, each returned with a
/// normalized basis, paired with the connecting type-0 edge lattice.
std::vector<std::pair<Lattice, Lattice>> neighbors_with_edges(const Lattice& L);
std::vector<Lattice> neighbors(const Lattice& L);

/// The anchor type-0 lattice of an anisotropic vector (see header comment).
/// Basis convention: b0 = c1 (the normalized multiple of x), b1 = c (the
/// orthogonal unit complement).  Throws InvalidInput if q(x) = 0.
Lattice lambda_b(const Vec2& x);

/// The two type-2 endpoints of a type-0 lattice, with normalized bases.
std::pair<Lattice, Lattice> edge_endpoints(const Lattice& type0);

/// Distance between two type-0 lattices in edge units: 0 if equal, else
/// (shortest type-2 path between closest endpoints) + 1.
int64_t tree_distance(const Lattice& e0, const Lattice& e1, const TreeBudget& budget = {});

/// BFS vertex of an enumerated region: normalized type-2 lattice plus the
/// index of its BFS parent (-1 for the first seed).
struct RegionVertex {
  Lattice lat;
  int64_t parent;
  int64_t depth;
};

/// Enumerate the connected region of type-2 vertices satisfying `include`,
/// starting from one seed or two mutually adjacent seeds (all seeds must
/// satisfy `include`).  The region must be convex in the tree for the
/// result to be the full region; every region handled here is an
/// intersection of balls, hence convex.  Throws RegionExceeded when the
/// node or radius budget is exhausted.
std::vector<RegionVertex> enumerate_region(
    const std::vector<Lattice>& seeds,
    const std::function<bool(const Lattice&)>& include, const TreeBudget& budget);

/// The arithmetic intersection number Int(x, y) of the special cycles
/// attached to a nondegenerate pair of vectors, computed on the tree:
/// decompose one cycle into vertical components over T(e1) plus a
/// horizontal part, and pair each against the other cycle:
///
///   Int = sum_{vertices L2 in R} n(e1, L2)
///       - sum_{edges L0 in R} (n(e1, L0) + 1)
///       + [q(e1) != 0] (n(e2, lambda_b(e1)) + 1),
///
/// where R = T(e1) cap T(e2).  Returns 0 when the Gram matrix is not
/// integral; throws InvalidClass on degenerate pairs.
int64_t tree_intersection(const Vec2& x, const Vec2& y, const TreeBudget& budget = {});

/// Recover the congruence class of the Gram matrix of an anisotropic pair
/// from tree data alone: the two anchors, their distance d, the norm
/// valuations n1 <= n2 (in val_pi/2 units), and - when the anchors agree -
/// the valuation of the pairing against the unit complement:
///   d = 0:                Diagonal(n1, n2 + val_pi (c2, c), +1)
///   d > 0, n1 <= n2 - d:  Diagonal(n1, n2 - d, +1)
///   otherwise n' = n1 + n2 - d: odd -> AntiDiagonal(n'),
///                               even -> Diagonal(n'/2, n'/2, +1).
/// Throws InvalidInput if either vector is isotropic, InvalidClass if the
/// pair is degenerate.
TClass tclass_from_tree(const Vec2& x, const Vec2& y, const TreeBudget& budget = {});

}  // namespace ulat
