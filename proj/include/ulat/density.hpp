#pragma once
/*
 * Exact local density polynomials of rank-2 Hermitian classes over the
 * ramified quadratic extension, their negated derivatives at X = 1, and
 * the density side of the intersection-number identity.
 *
 * Two base lattices occur: L = diag(v0, 1) with chi(-v0) = -1 (the
 * anisotropic plane, so eps2 = chi(-det L) = -1) and the hyperbolic plane
 * H with Gram pi^{-1}[[0,1],[-1,0]].  The variable X tracks the
 * hyperbolic tower L + H^r through the substitution X = q^{-2r}: the
 * normalized representation counts of a class T by the tower members
 * interpolate to a single polynomial alpha(base, T, X).
 *
 * With e1 = eps1(T), e2 kept symbolic, al <= be the diagonal exponents,
 * r = (n+1)/2 for anti-diagonal classes, and the geometric blocks
 * gs(lo,hi) = sum_{e=lo..hi} (qX)^e, gsi(lo,hi) = sum_{e=lo..hi} (X/q)^e:
 *
 *   alpha(L, Diag) = (1-X)(1 + e2 + q e2) gs(0,al)
 *                  - e1 q^{al+1} X^{be+1} (1-X) gsi(0,al)
 *                  - e1 (1+q)(X^{al+be+2} + e1 e2)
 *                  + (1+e2) q^{al+1} X^{al+1} (1 + e1 X^{be-al})
 *
 *   alpha(H, Diag) = (1 + 1/q + 1/q^2)(1-X) gs(0,al)
 *                  - e1 q^{al-1} X^{be+1} (1-X) gsi(0,al)
 *                  - (1/q)(1 + 1/q)(1 + e1 X^{al+be+2})
 *                  + q^al (1 + 1/q) X^{al+1} (1 + e1 X^{be-al+1})
 *
 *   alpha(L, Anti) = -q^{n+2} (1-X) gsi(r+1,n+1)
 *                  + (1-X)(1 + e2 + e2 q) gs(0,r)
 *                  - (q+1)(e2 + X^{n+2})
 *                  + (1+e2)(q+1) q^r X^{r+1}
 *
 *   alpha(H, Anti) = -(1-X) q^n gsi(r+1,n+1)
 *                  + (1 + 1/q + 1/q^2)(1-X) gs(0,r)
 *                  - (1/q + 1/q^2)(1 + X^{n+2})
 *                  + (1 + 1/q)^2 q^r X^{r+1}
 *
 * Diagonal classes with al < 0 and anti-diagonal ones with n < -1 get the
 * zero polynomial.  At X = 1 the L-base values collapse to
 *
 *   -e1 (1 + e1 e2)(1+q) + (1+e1)(1+e2) q^{al+1}     (diagonal),
 *   -(1+e2)(q+1)(1 - q^r)                            (anti-diagonal),
 *
 * so with e2 = -1 every split-representable class has alpha(L,T)|_{X=1}=0
 * and the leading datum is alpha' = -d/dX alpha|_{X=1}.  The identity
 * checked across the library:
 *
 *   intersect_closed(T, q, split)
 *     = 2 alpha'(L,T) / alpha(L,S)
 *     - (2 q^2/(q^2-1)) alpha(H,T)|_{X=1} / alpha(L,S),
 *
 * where S is the class diag(v0, 1) of the base, alpha(L,S) = 2(1+q).
 */

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "ulat/herm.hpp"

namespace ulat {

struct OutOfRange : std::runtime_error {
  explicit OutOfRange(const std::string& what) : std::runtime_error(what) {}
};

using ZInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Bivariate polynomial in X whose coefficients are Laurent polynomials
/// in q: an exact integer on each monomial X^i q^j (i >= 0, j of either
/// sign).  Zero coefficients are never stored.
struct DensityPoly {
  std::map<std::pair<int64_t, int64_t>, ZInt> coeff;  // (xdeg, qdeg) -> c

  static DensityPoly zero();
  static DensityPoly term(int64_t c, int64_t xdeg, int64_t qdeg);
  DensityPoly add(const DensityPoly& o) const;
  DensityPoly sub(const DensityPoly& o) const;
  DensityPoly mul(const DensityPoly& o) const;
  /// Formal derivative in X.
  DensityPoly dX() const;
  bool is_zero() const { return coeff.empty(); }
  /// Degree in X; -1 for the zero polynomial.
  int64_t xdegree() const;
  Rational eval(const Rational& qv, const Rational& Xv) const;
};

enum class BaseLattice { L, H };

/// The density polynomial of the class (see header comment).  eps2 is the
/// chi(-det) sign of the base L and is kept symbolic so both signs can be
/// probed; base H ignores it.  Out-of-range classes (diagonal alpha < 0,
/// anti-diagonal n < -1) give the zero polynomial.
DensityPoly alpha_poly(BaseLattice base, const TClass& cls, int eps2);

/// alpha_poly evaluated at exact rational (q, X).
Rational alpha_value(BaseLattice base, const TClass& cls, int eps2, int64_t q,
                     const Rational& X);

/// alpha' = -d/dX alpha|_{X=1} as an exact rational.
Rational alpha_prime(BaseLattice base, const TClass& cls, int eps2, int64_t q);

/// The density side of the identity (see header comment), with eps2 = -1.
/// Throws OutOfRange for eps1 = -1 diagonal classes, which have no pair
/// in the split plane.
Rational kr_rhs(const TClass& cls, int64_t q);

/// kr_rhs(cls, q) == intersect_closed(cls, q, split), exactly.
bool verify_kr(const TClass& cls, int64_t q);

}  // namespace ulat
