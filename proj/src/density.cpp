#include "ulat/density.hpp"

#include "ulat/divisor.hpp"

namespace ulat {

DensityPoly DensityPoly::zero() { return DensityPoly{}; }

DensityPoly DensityPoly::term(int64_t c, int64_t xdeg, int64_t qdeg) {
  DensityPoly r;
  if (c != 0) r.coeff[{xdeg, qdeg}] = c;
  return r;
}

DensityPoly DensityPoly::add(const DensityPoly& o) const {
  DensityPoly r = *this;
  for (const auto& [k, c] : o.coeff) {
    ZInt v = r.coeff[k] + c;
    if (v == 0)
      r.coeff.erase(k);
    else
      r.coeff[k] = v;
  }
  return r;
}

DensityPoly DensityPoly::sub(const DensityPoly& o) const {
  DensityPoly r = *this;
  for (const auto& [k, c] : o.coeff) {
    ZInt v = r.coeff[k] - c;
    if (v == 0)
      r.coeff.erase(k);
    else
      r.coeff[k] = v;
  }
  return r;
}

DensityPoly DensityPoly::mul(const DensityPoly& o) const {
  DensityPoly r;
  for (const auto& [k1, c1] : coeff)
    for (const auto& [k2, c2] : o.coeff) {
      std::pair<int64_t, int64_t> k{k1.first + k2.first, k1.second + k2.second};
      ZInt v = r.coeff[k] + c1 * c2;
      if (v == 0)
        r.coeff.erase(k);
      else
        r.coeff[k] = v;
    }
  return r;
}

DensityPoly DensityPoly::dX() const {
  DensityPoly r;
  for (const auto& [k, c] : coeff)
    if (k.first >= 1) r.coeff[{k.first - 1, k.second}] = c * k.first;
  return r;
}

int64_t DensityPoly::xdegree() const {
  int64_t d = -1;
  for (const auto& [k, c] : coeff)
    if (k.first > d) d = k.first;
  return d;
}

Rational DensityPoly::eval(const Rational& qv, const Rational& Xv) const {
  Rational acc = 0;
  for (const auto& [k, c] : coeff) {
    Rational mono(c);
    for (int64_t t = 0; t < k.first; ++t) mono *= Xv;
    if (k.second >= 0)
      for (int64_t t = 0; t < k.second; ++t) mono *= qv;
    else
      for (int64_t t = 0; t < -k.second; ++t) mono /= qv;
    acc += mono;
  }
  return acc;
}

namespace {

using DP = DensityPoly;

/// sum_{e=lo..hi} (qX)^e; the empty range gives the zero polynomial.
DP gs_qx(int64_t lo, int64_t hi) {
  DP r = DP::zero();
  for (int64_t e = lo; e <= hi; ++e) r = r.add(DP::term(1, e, e));
  return r;
}

/// sum_{e=lo..hi} (X/q)^e.
DP gs_xq(int64_t lo, int64_t hi) {
  DP r = DP::zero();
  for (int64_t e = lo; e <= hi; ++e) r = r.add(DP::term(1, e, -e));
  return r;
}

}  // namespace

DensityPoly alpha_poly(BaseLattice base, const TClass& cls, int eps2) {
  if (eps2 != 1 && eps2 != -1)
    throw OutOfRange("alpha_poly: eps2 must be +1 or -1");
  const DP one = DP::term(1, 0, 0);
  const DP omx = one.sub(DP::term(1, 1, 0));  // 1 - X

  if (cls.kind == TClass::Diagonal) {
    const int64_t al = cls.alpha, be = cls.beta;
    const int64_t e1 = cls.eps1, e2 = eps2;
    if (al < 0) return DP::zero();
    if (base == BaseLattice::L) {
      // (1-X)(1 + e2 + q e2) gs(0,al)
      DP t1 = omx.mul(DP::term(1 + e2, 0, 0).add(DP::term(e2, 0, 1)))
                  .mul(gs_qx(0, al));
      // -e1 q^{al+1} X^{be+1} (1-X) gsi(0,al)
      DP t2 = DP::term(-e1, be + 1, al + 1).mul(omx).mul(gs_xq(0, al));
      // -e1 (1+q)(X^{al+be+2} + e1 e2) = (1+q)(-e1 X^{al+be+2} - e2)
      DP t3 = DP::term(-e1, al + be + 2, 0)
                  .add(DP::term(-e2, 0, 0))
                  .mul(one.add(DP::term(1, 0, 1)));
      // (1+e2) q^{al+1} X^{al+1} (1 + e1 X^{be-al})
      DP t4 = DP::term(1 + e2, al + 1, al + 1)
                  .mul(one.add(DP::term(e1, be - al, 0)));
      return t1.add(t2).add(t3).add(t4);
    }
    // Base H; eps2 plays no role.
    DP c = one.add(DP::term(1, 0, -1)).add(DP::term(1, 0, -2));
    DP t1 = c.mul(omx).mul(gs_qx(0, al));
    DP t2 = DP::term(-e1, be + 1, al - 1).mul(omx).mul(gs_xq(0, al));
    // -(1/q)(1+1/q)(1 + e1 X^{al+be+2})
    DP t3 = one.add(DP::term(e1, al + be + 2, 0))
                .mul(DP::term(-1, 0, -1).add(DP::term(-1, 0, -2)));
    // q^al (1+1/q) X^{al+1} (1 + e1 X^{be-al+1})
    DP t4 = DP::term(1, al + 1, al)
                .add(DP::term(1, al + 1, al - 1))
                .mul(one.add(DP::term(e1, be - al + 1, 0)));
    return t1.add(t2).add(t3).add(t4);
  }

  const int64_t n = cls.n;
  const int64_t e2 = eps2;
  if (n < -1) return DP::zero();
  const int64_t r = (n + 1) / 2;
  if (base == BaseLattice::L) {
    // -q^{n+2} (1-X) gsi(r+1,n+1)
    DP t1 = DP::term(-1, 0, n + 2).mul(omx).mul(gs_xq(r + 1, n + 1));
    // (1-X)(1 + e2 + e2 q) gs(0,r)
    DP t2 = omx.mul(DP::term(1 + e2, 0, 0).add(DP::term(e2, 0, 1)))
                .mul(gs_qx(0, r));
    // -(q+1)(e2 + X^{n+2})
    DP t3 = DP::term(e2, 0, 0)
                .add(DP::term(1, n + 2, 0))
                .mul(DP::term(-1, 0, 0).add(DP::term(-1, 0, 1)));
    // (1+e2)(q+1) q^r X^{r+1}
    DP t4 = DP::term(1 + e2, r + 1, r).mul(one.add(DP::term(1, 0, 1)));
    return t1.add(t2).add(t3).add(t4);
  }
  // -(1-X) q^n gsi(r+1,n+1)
  DP t1 = DP::term(-1, 0, n).mul(omx).mul(gs_xq(r + 1, n + 1));
  // (1+1/q+1/q^2)(1-X) gs(0,r)
  DP t2 = one.add(DP::term(1, 0, -1))
              .add(DP::term(1, 0, -2))
              .mul(omx)
              .mul(gs_qx(0, r));
  // -(1/q+1/q^2)(1 + X^{n+2})
  DP t3 = one.add(DP::term(1, n + 2, 0))
              .mul(DP::term(-1, 0, -1).add(DP::term(-1, 0, -2)));
  // (1+1/q)^2 q^r X^{r+1} = (1 + 2/q + 1/q^2) q^r X^{r+1}
  DP t4 = one.add(DP::term(2, 0, -1))
              .add(DP::term(1, 0, -2))
              .mul(DP::term(1, r + 1, r));
  return t1.add(t2).add(t3).add(t4);
}

Rational alpha_value(BaseLattice base, const TClass& cls, int eps2, int64_t q,
                     const Rational& X) {
  return alpha_poly(base, cls, eps2).eval(Rational(q), X);
}

Rational alpha_prime(BaseLattice base, const TClass& cls, int eps2,
                     int64_t q) {
  return -alpha_poly(base, cls, eps2).dX().eval(Rational(q), Rational(1));
}

Rational kr_rhs(const TClass& cls, int64_t q) {
  if (cls.kind == TClass::Diagonal && cls.eps1 == -1)
    throw OutOfRange(
        "kr_rhs: eps1 = -1 diagonal classes are not represented by pairs in "
        "the split plane");
  const TClass base_cls = TClass::diagonal(0, 0, -1);
  const Rational aLS =
      alpha_value(BaseLattice::L, base_cls, -1, q, Rational(1));
  const Rational ap = alpha_prime(BaseLattice::L, cls, -1, q);
  const Rational aH = alpha_value(BaseLattice::H, cls, -1, q, Rational(1));
  const Rational q2 = Rational(q) * Rational(q);
  return Rational(2) * ap / aLS - (Rational(2) * q2 / (q2 - 1)) * aH / aLS;
}

bool verify_kr(const TClass& cls, int64_t q) {
  return kr_rhs(cls, q) ==
         Rational(intersect_closed(cls, q, HermSpace::Split));
}

}  // namespace ulat
