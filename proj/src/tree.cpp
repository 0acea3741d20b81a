#include "ulat/tree.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <string>
#include <tuple>

#include "ulat/padic.hpp"

namespace ulat {

namespace {

/*
 * The dual-integrality condition on (G^t)^{-1} = adj(G^t)/det G reads
 * val(entry of G) >= val(det G) for every Gram entry: the adjugate of a
 * 2x2 matrix permutes the entries up to sign.
 */
bool dual_integral(const Mat2& G, int64_t det_val) {
  for (const PAdicElem* e : {&G.a, &G.b, &G.c, &G.d})
    if (!e->is_zero() && e->val_pi() < det_val) return false;
  return true;
}

}  // namespace

VertexType vertex_type(const Lattice& L) {
  Mat2 G = gram_lattice(L);
  for (const PAdicElem* e : {&G.a, &G.b, &G.c, &G.d})
    if (!e->is_zero() && e->val_pi() < -1) return VertexType::NotVertex;
  PAdicElem det = G.det();
  if (det.is_zero()) return VertexType::NotVertex;
  int64_t dv = det.val_pi();
  if (dv == 0 && dual_integral(G, 0)) return VertexType::Type0;
  if (dv == -2 && dual_integral(G, -2)) return VertexType::Type2;
  return VertexType::NotVertex;
}

Lattice normalize_type2(const Lattice& L) {
  if (vertex_type(L) != VertexType::Type2)
    throw InvalidInput("normalize_type2: not a type-2 lattice");
  const PrimeParam& f = L.b0.c0.field();
  Vec2 f0 = L.b0;
  Vec2 f1 = L.b1;
  PAdicElem a = qform(f0);
  PAdicElem d = qform(f1);
  /*
   * The off-diagonal entry b = (f0, f1) of a type-2 Gram has valuation
   * exactly -1 (the diagonal lies in O and det has valuation -2), so all
   * divisions below are by units after the explicit pi-shifts.
   *
   * Step 1: replace f0 by an isotropic f0 - lam f1.  Writing
   * lam = s / conj(b) with s in F0 turns q(f0 - lam f1) into the quadratic
   * s^2 d / Nm(b) - 2 s + a, whose discriminant 1 - a d / Nm(b) lies in
   * 1 + p O and is therefore a unit square; the root with the minus sign
   * has val(s) = val(a), making lam integral.
   */
  if (a.is_zero()) {
    // already isotropic
  } else if (d.is_zero()) {
    std::swap(f0, f1);
  } else {
    PAdicElem b = herm(f0, f1);
    PAdicElem nb = b.norm();
    PAdicElem one = PAdicElem::one(f);
    PAdicElem disc = one.sub(a.mul(d).div(nb));
    PAdicElem s = one.sub(sqrt_unit(disc)).mul(nb).div(d);
    PAdicElem lam = s.div(b.conj());
    f0 = f0.sub(f1.scale(lam));
  }
  // Step 2: q(f1 - mu f0) = q(f1) - Tr(mu (f0, f1)) vanishes for
  // mu = q(f1) / (2 (f0, f1)), an integral scalar of valuation >= 1.
  PAdicElem b = herm(f0, f1);
  PAdicElem d1 = qform(f1);
  if (!d1.is_zero()) {
    PAdicElem mu = d1.div(b.add(b));
    f1 = f1.sub(f0.scale(mu));
  }
  // Step 3: scale f0 by the unit (pi b)^{-1} so the pairing is pi^{-1}.
  b = herm(f0, f1);
  PAdicElem t = PAdicElem::pi(f).mul(b).inv();
  f0 = f0.scale(t);
  return Lattice{f0, f1};
}

std::vector<std::pair<Lattice, Lattice>> neighbors_with_edges(const Lattice& L) {
  const PrimeParam& f = L.b0.c0.field();
  const Vec2& b = L.b0;
  const Vec2& bp = L.b1;
  std::vector<std::pair<Lattice, Lattice>> out;
  out.reserve(static_cast<size_t>(f.p) + 1);
  out.push_back({Lattice{bp.shift(1), b.shift(-1)}, Lattice{b, bp.shift(1)}});
  for (int64_t k = 0; k < f.p; ++k) {
    Vec2 kb_bp = b.scale(PAdicElem::from_int(f, k)).add(bp);
    out.push_back({Lattice{kb_bp.shift(-1), b.shift(1)}, Lattice{b.shift(1), kb_bp}});
  }
  return out;
}

std::vector<Lattice> neighbors(const Lattice& L) {
  std::vector<Lattice> out;
  for (auto& [nbr, edge] : neighbors_with_edges(L)) out.push_back(nbr);
  return out;
}

Lattice lambda_b(const Vec2& x) {
  PAdicElem qx = qform(x);
  if (qx.is_zero()) throw InvalidInput("lambda_b: isotropic vector");
  const PrimeParam& f = x.c0.field();
  Vec2 c1 = x.shift(-qx.val_pi() / 2);
  PAdicElem u0 = qform(c1);
  // Project the standard basis onto the line orthogonal to c1; at least
  // one projection is nonzero, and all nonzero ones are proportional.
  Vec2 cand{PAdicElem::zero(f), PAdicElem::zero(f)};
  for (int i = 0; i < 2; ++i) {
    Vec2 w = (i == 0) ? Vec2{PAdicElem::one(f), PAdicElem::zero(f)}
                      : Vec2{PAdicElem::zero(f), PAdicElem::one(f)};
    Vec2 c = w.sub(c1.scale(herm(w, c1).div(u0)));
    if (!c.is_zero()) {
      cand = c;
      break;
    }
  }
  cand = cand.shift(-qform(cand).val_pi() / 2);
  return Lattice{c1, cand};
}

std::pair<Lattice, Lattice> edge_endpoints(const Lattice& type0) {
  if (vertex_type(type0) != VertexType::Type0)
    throw InvalidInput("edge_endpoints: not a type-0 lattice");
  // A unimodular integral Gram represents a unit: if both diagonal norms
  // are non-units the off-diagonal entry b is a unit with unit trace, and
  // q(e0 + e1) = q(e0) + q(e1) + Tr(b) is a unit.
  std::array<Vec2, 3> cand = {type0.b0, type0.b1, type0.b0.add(type0.b1)};
  size_t pivot = 0;
  while (qform(cand[pivot]).is_zero() || qform(cand[pivot]).val_pi() != 0) ++pivot;
  Vec2 c1 = cand[pivot];
  Vec2 other = cand[pivot == 0 ? 1 : 0];
  PAdicElem u0 = qform(c1);
  Vec2 c = other.sub(c1.scale(herm(other, c1).div(u0)));
  PAdicElem u1 = qform(c);
  // Hyperbolize the orthogonal unit basis: -u0/u1 is a unit square since
  // the ambient plane is split, and the new basis spans the same lattice
  // (transition determinant -s/u0, a unit).
  PAdicElem s = sqrt_unit(u0.div(u1).neg());
  Vec2 w0p = c1.add(c.scale(s));
  Vec2 w1p = c1.sub(c.scale(s)).scale(u0.add(u0).inv());
  Lattice P{w0p.shift(-1), w1p};
  Lattice Q{w0p.neg(), w1p.shift(-1)};
  return {P, Q};
}

std::vector<RegionVertex> enumerate_region(
    const std::vector<Lattice>& seeds,
    const std::function<bool(const Lattice&)>& include, const TreeBudget& budget) {
  if (seeds.empty() || seeds.size() > 2)
    throw InvalidInput("enumerate_region: need one seed or two adjacent seeds");
  std::vector<RegionVertex> out;
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (!include(seeds[i]))
      throw InvalidInput("enumerate_region: seed outside the region");
    out.push_back({seeds[i], i == 0 ? (seeds.size() == 2 ? 1 : -1) : 0, 0});
  }
  const int64_t max_radius = budget.max_radius < 0 ? 64 : budget.max_radius;
  for (size_t head = 0; head < out.size(); ++head) {
    const Lattice cur = out[head].lat;  // copy: out may reallocate below
    const int64_t parent = out[head].parent;
    const int64_t depth = out[head].depth;
    for (const Lattice& nbr : neighbors(cur)) {
      if (parent >= 0 && lattice_eq(nbr, out[static_cast<size_t>(parent)].lat))
        continue;
      if (!include(nbr)) continue;
      if (depth + 1 > max_radius)
        throw RegionExceeded("enumerate_region: radius budget exhausted");
      out.push_back({nbr, static_cast<int64_t>(head), depth + 1});
      if (static_cast<int64_t>(out.size()) > budget.max_nodes)
        throw RegionExceeded("enumerate_region: node budget exhausted");
    }
  }
  return out;
}

int64_t tree_distance(const Lattice& e0, const Lattice& e1, const TreeBudget& budget) {
  if (vertex_type(e0) != VertexType::Type0 || vertex_type(e1) != VertexType::Type0)
    throw InvalidInput("tree_distance: arguments must be type-0 lattices");
  if (lattice_eq(e0, e1)) return 0;
  auto [p0, q0] = edge_endpoints(e0);
  auto [p1, q1] = edge_endpoints(e1);
  const int64_t max_radius = budget.max_radius < 0 ? 64 : budget.max_radius;
  std::vector<RegionVertex> bfs = {{p0, 1, 0}, {q0, 0, 0}};
  for (size_t head = 0; head < bfs.size(); ++head) {
    const Lattice cur = bfs[head].lat;
    const int64_t parent = bfs[head].parent;
    const int64_t depth = bfs[head].depth;
    if (lattice_eq(cur, p1) || lattice_eq(cur, q1)) return depth + 1;
    if (depth + 1 > max_radius)
      throw RegionExceeded("tree_distance: radius budget exhausted");
    for (const Lattice& nbr : neighbors(cur)) {
      if (lattice_eq(nbr, bfs[static_cast<size_t>(parent)].lat)) continue;
      bfs.push_back({nbr, static_cast<int64_t>(head), depth + 1});
      if (static_cast<int64_t>(bfs.size()) > budget.max_nodes)
        throw RegionExceeded("tree_distance: node budget exhausted");
    }
  }
  throw RegionExceeded("tree_distance: search exhausted");
}

int64_t tree_intersection(const Vec2& x, const Vec2& y, const TreeBudget& budget) {
  Mat2 g = gram_pair(x, y);
  TClass cls = classify(g);  // rejects degenerate pairs
  for (const PAdicElem* e : {&g.a, &g.b, &g.d})
    if (!e->is_zero() && e->val_pi() < 0) return 0;

  Vec2 e1 = x;
  Vec2 e2 = y;
  std::vector<Lattice> seeds;
  if (cls.kind == TClass::Diagonal) {
    // Orthogonalize first: the common anchor of the orthogonal pair
    // carries both seeds, and the horizontal part of the shorter vector
    // pairs to n(e2, anchor) + 1 = beta + 1.
    std::tie(e1, e2) = orthogonalize_pair(x, y);
    auto [sp, sq] = edge_endpoints(lambda_b(e1));
    seeds = {sp, sq};
  } else {
    // AntiDiagonal(n) with n >= 1: n = -1 Grams are non-integral and were
    // handled above.  pi^{-r} (O x + O y) with r = (n+1)/2 is type 2 and
    // belongs to both supports.
    int64_t r = (cls.n + 1) / 2;
    seeds = {normalize_type2(Lattice{x.shift(-r), y.shift(-r)})};
    // Expand the cycle of an isotropic vector when one exists (it has no
    // horizontal part); otherwise expand the lower-valuation side.
    bool swap_sides;
    if (qform(x).is_zero())
      swap_sides = false;
    else if (qform(y).is_zero())
      swap_sides = true;
    else
      swap_sides = qform(y).val_pi() < qform(x).val_pi();
    if (swap_sides) std::swap(e1, e2);
  }

  TreeBudget eff = budget;
  if (eff.max_radius < 0) {
    int64_t vmax = 0;
    for (const PAdicElem* e : {&g.a, &g.b, &g.d})
      if (!e->is_zero()) vmax = std::max(vmax, e->val_pi());
    eff.max_radius = vmax + 2;
  }
  auto include = [&](const Lattice& L) {
    return n_of(e1, L) >= 0 && n_of(e2, L) >= 0;
  };
  std::vector<RegionVertex> region = enumerate_region(seeds, include, eff);

  int64_t total = 0;
  for (size_t i = 0; i < region.size(); ++i) {
    int64_t n1 = n_of(e1, region[i].lat);
    total += n1;
    if (i >= 1) {
      int64_t np = n_of(e1, region[static_cast<size_t>(region[i].parent)].lat);
      total -= std::min(n1, np) + 1;
    }
  }
  if (!qform(e1).is_zero()) total += n_of(e2, lambda_b(e1)) + 1;
  return total;
}

TClass tclass_from_tree(const Vec2& x, const Vec2& y, const TreeBudget& budget) {
  PAdicElem qx = qform(x);
  PAdicElem qy = qform(y);
  if (qx.is_zero() || qy.is_zero())
    throw InvalidInput("tclass_from_tree: isotropic input");
  if (gram_pair(x, y).det().is_zero())
    throw InvalidClass("tclass_from_tree: degenerate pair");
  Vec2 b1 = x;
  Vec2 b2 = y;
  if (qx.val_pi() > qy.val_pi()) std::swap(b1, b2);
  int64_t n1 = qform(b1).val_pi() / 2;
  int64_t n2 = qform(b2).val_pi() / 2;
  Lattice a1 = lambda_b(b1);
  Lattice a2 = lambda_b(b2);
  if (lattice_eq(a1, a2)) {
    // Same anchor: writing the unit-normalized b2 as s c1 + t c against
    // the orthogonal basis of the anchor, the pairing with c is t q(c)
    // and the class is Diagonal(n1, n2 + val_pi(t)).
    Vec2 c2 = b2.shift(-n2);
    int64_t k = herm(c2, a1.b1).val_pi();
    return TClass::diagonal(n1, n2 + k, +1);
  }
  int64_t d = tree_distance(a1, a2, budget);
  if (n1 <= n2 - d) return TClass::diagonal(n1, n2 - d, +1);
  int64_t np = n1 + n2 - d;
  if (np % 2 != 0) return TClass::antidiagonal(np);
  return TClass::diagonal(np / 2, np / 2, +1);
}

}  // namespace ulat
