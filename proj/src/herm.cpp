#include "ulat/herm.hpp"

#include <limits>

namespace ulat {

namespace {

PAdicElem minus_p_pow(const PrimeParam& f, int64_t k) {
  // (-p)^k for k of either sign; -p = Nm(pi) generates the norm group of F0
  // together with the units, and even powers of pi contribute (-p)^k.
  PAdicElem base = PAdicElem::from_int(f, -f.p);
  PAdicElem r = PAdicElem::one(f);
  int64_t e = k >= 0 ? k : -k;
  for (int64_t i = 0; i < e; ++i) r = r.mul(base);
  return k >= 0 ? r : r.inv();
}

}  // namespace

PAdicElem herm(const Vec2& x, const Vec2& y) {
  return x.c0.mul(y.c1.conj()).add(x.c1.mul(y.c0.conj()));
}

PAdicElem qform(const Vec2& x) { return herm(x, x); }

Mat2 Mat2::mul(const Mat2& o) const {
  return {a.mul(o.a).add(b.mul(o.c)), a.mul(o.b).add(b.mul(o.d)),
          c.mul(o.a).add(d.mul(o.c)), c.mul(o.b).add(d.mul(o.d))};
}

Mat2 gram_pair(const Vec2& x, const Vec2& y) {
  return {qform(x), herm(x, y), herm(y, x), qform(y)};
}

TClass TClass::diagonal(int64_t alpha, int64_t beta, int eps1) {
  if (alpha > beta) throw InvalidClass("TClass: diagonal requires alpha <= beta");
  if (eps1 != 1 && eps1 != -1) throw InvalidClass("TClass: eps1 must be +-1");
  TClass c;
  c.kind = Diagonal;
  c.alpha = alpha;
  c.beta = beta;
  c.eps1 = eps1;
  return c;
}

TClass TClass::antidiagonal(int64_t n) {
  if (((n % 2) + 2) % 2 != 1) throw InvalidClass("TClass: antidiagonal requires n odd");
  TClass c;
  c.kind = AntiDiagonal;
  c.n = n;
  return c;
}

bool TClass::operator==(const TClass& o) const {
  if (kind != o.kind) return false;
  if (kind == Diagonal) return alpha == o.alpha && beta == o.beta && eps1 == o.eps1;
  return n == o.n;
}

std::string TClass::to_string() const {
  if (kind == Diagonal)
    return "Diagonal(" + std::to_string(alpha) + "," + std::to_string(beta) + "," +
           (eps1 > 0 ? "+1" : "-1") + ")";
  return "AntiDiagonal(" + std::to_string(n) + ")";
}

TClass classify(const Mat2& T) {
  if (!T.a.in_f0() || !T.d.in_f0() || T.c != T.b.conj())
    throw InvalidClass("classify: matrix is not Hermitian");
  PAdicElem det = T.det();
  if (det.is_zero()) throw InvalidClass("classify: degenerate matrix");
  const int64_t INF = INT64_MAX / 2;
  int64_t vd = INF;
  if (!T.a.is_zero()) vd = T.a.val_pi();
  if (!T.d.is_zero() && T.d.val_pi() < vd) vd = T.d.val_pi();
  int64_t vo = T.b.is_zero() ? INF : T.b.val_pi();
  if (((vo % 2) + 2) % 2 == 1 && vo < vd) return TClass::antidiagonal(vo);
  int64_t mu = vd < vo ? vd : vo;
  // mu is even here: F0 valuations are even, and an odd vo below them was
  // handled above.
  int64_t alpha = mu / 2;
  int64_t beta = det.val_pi() / 2 - alpha;
  return TClass::diagonal(alpha, beta, chi(det.neg()));
}

std::pair<Vec2, Vec2> canonical_pair(const PrimeParam& f, const TClass& cls) {
  auto one = PAdicElem::one(f);
  auto zero = PAdicElem::zero(f);
  if (cls.kind == TClass::AntiDiagonal) {
    // (pi^n w0, w1): Gram [[0, pi^n], [(-pi)^n, 0]].
    return {Vec2{one.shift(cls.n), zero}, Vec2{zero, one}};
  }
  if (cls.eps1 != 1)
    throw NotRepresentable("canonical_pair: eps1 = -1 classes do not embed in the split plane");
  // b1 = c w0 + w1 with c = -(-p)^alpha / 2, so q(b1) = 2c = -(-p)^alpha;
  // b2 = pi^(beta-alpha) (c w0 - w1), orthogonal to b1 with q(b2) = (-p)^beta.
  // The Gram diag(-(-p)^alpha, (-p)^beta) has chi(-det) = chi((-p)^{a+b}) = +1.
  PAdicElem c = minus_p_pow(f, cls.alpha).neg().mul(PAdicElem::from_rational(f, 1, 2));
  Vec2 b1{c, one};
  int64_t s = cls.beta - cls.alpha;
  Vec2 b2{c.shift(s), one.neg().shift(s)};
  return {b1, b2};
}

std::pair<Vec2, Vec2> randomize_pair(const PrimeParam& f, const Vec2& x, const Vec2& y,
                                     std::mt19937_64& rng, bool congruence) {
  Vec2 a = x, b = y;
  std::uniform_int_distribution<int> opd(0, congruence ? 6 : 3);
  std::uniform_int_distribution<int64_t> ud(1, f.p - 1);
  std::uniform_int_distribution<int64_t> sd(-3, 3);
  std::uniform_int_distribution<int> len(4, 12);
  auto pi = PAdicElem::pi(f);
  int steps = len(rng);
  for (int i = 0; i < steps; ++i) {
    switch (opd(rng)) {
      case 0: {  // swap the two coordinates: w0 <-> w1 is an isometry
        std::swap(a.c0, a.c1);
        std::swap(b.c0, b.c1);
        break;
      }
      case 1: {  // shear w1 -> w1 + s pi w0: coords (c0,c1) -> (c0 + s pi c1, c1)
        auto s = PAdicElem::from_int(f, ud(rng)).mul(pi);
        a.c0 = a.c0.add(s.mul(a.c1));
        b.c0 = b.c0.add(s.mul(b.c1));
        break;
      }
      case 2: {  // shear w0 -> w0 + s pi w1
        auto s = PAdicElem::from_int(f, ud(rng)).mul(pi);
        a.c1 = a.c1.add(s.mul(a.c0));
        b.c1 = b.c1.add(s.mul(b.c0));
        break;
      }
      case 3: {  // scale w0 -> c w0, w1 -> conj(c)^-1 w1 with c a unit
        auto c = PAdicElem::from_pair(f, ud(rng), 1, sd(rng), 1);
        auto ci = c.conj().inv();
        a.c0 = c.mul(a.c0);
        a.c1 = ci.mul(a.c1);
        b.c0 = c.mul(b.c0);
        b.c1 = ci.mul(b.c1);
        break;
      }
      case 4: {  // congruence: x -> x + gamma y
        auto g = PAdicElem::from_pair(f, sd(rng), 1, sd(rng), 1);
        a = a.add(b.scale(g));
        break;
      }
      case 5: {  // congruence: y -> y + gamma x
        auto g = PAdicElem::from_pair(f, sd(rng), 1, sd(rng), 1);
        b = b.add(a.scale(g));
        break;
      }
      default: {  // congruence: swap the pair / scale one by a unit
        std::swap(a, b);
        auto u = PAdicElem::from_pair(f, ud(rng), 1, sd(rng), 1);
        a = a.scale(u);
        break;
      }
    }
  }
  return {a, b};
}

std::pair<Vec2, Vec2> orthogonalize_pair(const Vec2& x, const Vec2& y) {
  TClass cls = classify(gram_pair(x, y));  // rejects degenerate pairs
  if (cls.kind != TClass::Diagonal)
    throw InvalidClass("orthogonalize_pair: anti-diagonal pairs have no orthogonal basis");
  std::array<Vec2, 3> cand = {x, y, x.add(y)};
  int64_t best = std::numeric_limits<int64_t>::max();
  size_t bi = 0;
  for (size_t i = 0; i < 3; ++i) {
    PAdicElem q = qform(cand[i]);
    if (!q.is_zero() && q.val_pi() < best) {
      best = q.val_pi();
      bi = i;
    }
  }
  Vec2 e1 = cand[bi];
  Vec2 other = cand[bi == 0 ? 1 : 0];
  Vec2 e2 = other.sub(e1.scale(herm(other, e1).div(qform(e1))));
  return {e1, e2};
}

std::pair<PAdicElem, PAdicElem> coords_in(const Vec2& x, const Lattice& L) {
  PAdicElem det = L.b0.c0.mul(L.b1.c1).sub(L.b1.c0.mul(L.b0.c1));
  if (det.is_zero()) throw InvalidInput("coords_in: degenerate lattice basis");
  PAdicElem s = x.c0.mul(L.b1.c1).sub(L.b1.c0.mul(x.c1)).div(det);
  PAdicElem t = L.b0.c0.mul(x.c1).sub(x.c0.mul(L.b0.c1)).div(det);
  return {s, t};
}

int64_t n_of(const Vec2& x, const Lattice& L) {
  if (x.is_zero()) throw InvalidInput("n_of: zero vector");
  auto [s, t] = coords_in(x, L);
  if (s.is_zero()) return t.val_pi();
  if (t.is_zero()) return s.val_pi();
  return std::min(s.val_pi(), t.val_pi());
}

bool lattice_eq(const Lattice& A, const Lattice& B) {
  return n_of(A.b0, B) >= 0 && n_of(A.b1, B) >= 0 && n_of(B.b0, A) >= 0 &&
         n_of(B.b1, A) >= 0;
}

Mat2 gram_lattice(const Lattice& L) { return gram_pair(L.b0, L.b1); }

Lattice dual_basis(const Lattice& L) {
  // d_i = sum_k b_k M_{ki} with M = (G^t)^{-1}: then (d_i, b_j) = delta_ij.
  Mat2 G = gram_lattice(L);
  PAdicElem det = G.det();
  if (det.is_zero()) throw InvalidInput("dual_basis: degenerate lattice");
  // (G^t)^{-1} = adj(G^t)/det(G);  G^t = [[a, c], [b, d]].
  PAdicElem ia = G.d.div(det), ib = G.c.neg().div(det);
  PAdicElem ic = G.b.neg().div(det), id = G.a.div(det);
  Vec2 d0 = L.b0.scale(ia).add(L.b1.scale(ic));
  Vec2 d1 = L.b0.scale(ib).add(L.b1.scale(id));
  return {d0, d1};
}

}  // namespace ulat
