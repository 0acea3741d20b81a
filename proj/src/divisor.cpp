#include "ulat/divisor.hpp"

#include <string>

#include "ulat/padic.hpp"

namespace ulat {

namespace {

int64_t geom_sum(int64_t q, int64_t lo, int64_t hi) {
  int64_t acc = 0;
  int64_t pw = 1;
  for (int64_t e = 0; e <= hi; ++e, pw *= q)
    if (e >= lo) acc += pw;
  return acc;
}

bool contained_in(const Lattice& inner, const Lattice& outer) {
  return n_of(inner.b0, outer) >= 0 && n_of(inner.b1, outer) >= 0;
}

}  // namespace

Divisor decompose(const Vec2& b, const TreeBudget& budget) {
  if (b.is_zero()) throw InvalidInput("decompose: zero vector");
  PAdicElem qb = qform(b);
  if (qb.is_zero())
    throw RegionExceeded("decompose: isotropic vector, the support is an infinite cone");
  if (qb.val_pi() < 0) return {};  // Z(b) = 0
  int64_t a = qb.val_pi() / 2;
  Lattice anchor = lambda_b(b);
  auto [sp, sq] = edge_endpoints(anchor);
  TreeBudget eff = budget;
  // n(b, .) drops by at most 1 per step and equals a on the seeds.
  if (eff.max_radius < 0) eff.max_radius = a + 2;
  auto include = [&](const Lattice& L) { return n_of(b, L) >= 0; };
  std::vector<RegionVertex> region = enumerate_region({sp, sq}, include, eff);

  Divisor D;
  for (const RegionVertex& rv : region) {
    int64_t n = n_of(b, rv.lat);
    if (n >= 1) D.terms.push_back({Component{Component::PLine, rv.lat, std::nullopt}, n});
  }
  // Every edge of the support region joins a BFS vertex to its parent
  // (the region is connected and the ambient graph is a tree), so the
  // parent pointers enumerate the edges exactly once.
  for (size_t i = 1; i < region.size(); ++i) {
    const Lattice& par = region[static_cast<size_t>(region[i].parent)].lat;
    bool found = false;
    for (const auto& [nbr, edge] : neighbors_with_edges(par)) {
      if (lattice_eq(nbr, region[i].lat)) {
        D.terms.push_back({Component{Component::Exc, edge, std::nullopt}, n_of(b, edge) + 1});
        found = true;
        break;
      }
    }
    if (!found) throw InvalidInput("decompose: region vertex without a connecting edge");
  }
  D.terms.push_back({Component{Component::Horizontal, anchor, b}, 1});
  return D;
}

int64_t component_pairing(const Component& c1, const Component& c2) {
  if (c1.kind == Component::PLine && c2.kind == Component::PLine) {
    if (!lattice_eq(c1.lat, c2.lat)) return 0;
    return -(c1.lat.b0.c0.field().p + 1);
  }
  if (c1.kind == Component::Exc && c2.kind == Component::Exc)
    return lattice_eq(c1.lat, c2.lat) ? -2 : 0;
  if (c1.kind == Component::Horizontal && c2.kind == Component::Horizontal) {
    if (!herm(*c1.vec, *c2.vec).is_zero())
      throw UnsupportedPairing(
          "component_pairing: horizontal components with non-orthogonal vectors");
    return 0;
  }
  if (c1.kind > c2.kind) return component_pairing(c2, c1);
  if (c1.kind == Component::PLine && c2.kind == Component::Exc)
    return contained_in(c2.lat, c1.lat) ? 1 : 0;
  if (c1.kind == Component::PLine) return 0;  // PLine . Horizontal
  // Exc . Horizontal: 1 iff the edge is the anchor of the vector.
  return lattice_eq(c1.lat, c2.lat) ? 1 : 0;
}

int64_t cycle_pairing(const Component& c, const Vec2& b) {
  if (b.is_zero()) throw InvalidInput("cycle_pairing: zero vector");
  switch (c.kind) {
    case Component::PLine:
      return n_of(b, c.lat) >= 0 ? 1 : 0;
    case Component::Exc:
      return n_of(b, c.lat) >= 0 ? -1 : 0;
    default: {
      if (!herm(*c.vec, b).is_zero())
        throw UnsupportedPairing(
            "cycle_pairing: horizontal component against a non-orthogonal vector");
      PAdicElem qb = qform(b);
      if (qb.is_zero() || qb.val_pi() < 0) return 0;  // Z(b) = 0
      return n_of(b, c.lat) + 1;
    }
  }
}

int64_t intersect_closed(const TClass& cls, int64_t q, HermSpace space) {
  if (cls.kind == TClass::Diagonal) {
    if (cls.alpha < 0) return 0;
    if (space == HermSpace::Split) {
      if (cls.eps1 == -1)
        throw NotRepresentable(
            "intersect_closed: eps1 = -1 diagonal classes do not embed in the split plane");
      return cls.alpha + cls.beta - 2 * geom_sum(q, 1, cls.alpha);
    }
    int64_t acc = 0;
    int64_t pw = 1;
    for (int64_t s = 0; s <= cls.alpha; ++s, pw *= q)
      acc += pw * (cls.alpha + cls.beta + 1 - 2 * s);
    return 2 * acc - cls.alpha - cls.beta - 2;
  }
  if (space == HermSpace::Nonsplit)
    throw InvalidClass("intersect_closed: anti-diagonal classes arise only in the split plane");
  if (cls.n < -1) return 0;
  int64_t r = (cls.n + 1) / 2;
  return -(q + 1) * geom_sum(q, 0, r - 1) + cls.n + 1;
}

}  // namespace ulat
