#pragma once
/*
 * Exact-enough arithmetic in the ramified quadratic extension F = F0(pi),
 * pi^2 = p, over the p-adic base field F0 = Q_p (p an odd prime).
 *
 * Every nonzero element is stored in the canonical shape
 *
 *     x = pi^v * (u0 + u1*pi),      p does not divide u0,
 *
 * with v the pi-adic valuation and the unit pair (u0, u1) kept modulo p^K.
 * K is a fixed working precision chosen so that p^K < 2^62; products of two
 * residues then fit in an unsigned __int128 without overflow.  Multiplication
 * and inversion are exact on this representation (the canonical shape is
 * preserved digit-for-digit); addition can cancel leading digits, in which
 * case the result is renormalized by pulling powers of pi out of the unit
 * pair.  Pulling a base-p digit shifts unknown digits into the top of the
 * residue, so each element carries a trusted-digit count t <= K: freshly
 * constructed values have t = K, ring operations propagate the minimum of
 * their operands, and every pulled digit decrements it.  A difference whose
 * trusted digits all vanish is zero at the available precision (that is what
 * operator== means here); a nonzero result left with no trusted digit at
 * all refuses to continue (PrecisionExhausted) instead of silently
 * returning truncated values.  The invariant this preserves: a nonzero
 * element's valuation and leading digit are always reliable.  That makes
 * every valuation comparison in this library exact, and a "zero at
 * available precision" verdict can only be wrong for values whose true
 * valuation exceeds the remaining cap - several dozen pi-adic digits, far
 * beyond the bounded valuations (a few dozen at most) these algorithms
 * produce, while K >= 16 at the primes in scope.
 *
 * The Galois conjugation fixes F0 and sends pi to -pi:
 *     conj(pi^v (u0 + u1 pi)) = (-1)^v pi^v (u0 - u1 pi).
 * Tr(x) = x + conj(x) and Nm(x) = x * conj(x) land in F0; in particular
 * Nm(pi) = -p, so -p is a norm and the norm character chi of F0^x satisfies
 * chi(-p) = +1.  chi is computed as chi(p^k u) = chi(-1)^k legendre(u, p).
 */

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ulat {

struct PrecisionExhausted : std::runtime_error {
  explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};
struct DivisionByZero : std::runtime_error {
  explicit DivisionByZero(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// Parameters of the ambient field: the odd prime p and the working
/// precision.  `digits` asks for a number of pi-adic digits; the base-p
/// precision K = ceil(digits/2) is clamped so that p^K < 2^62.
struct PrimeParam {
  int64_t p = 3;
  int K = 32;           // unit parts live in Z / p^K
  uint64_t pk = 0;      // p^K
  int pi_digits = 64;   // requested precision, in pi-adic digits

  static PrimeParam make(int64_t p, int digits = 64);
};

/// Legendre symbol (a/p) in {-1,0,+1} for an odd prime p.
int legendre(int64_t a, int64_t p);

class PAdicElem {
 public:
  PAdicElem() = default;  // exact zero with no field attached

  static PAdicElem zero(const PrimeParam& f);
  static PAdicElem one(const PrimeParam& f);
  static PAdicElem pi(const PrimeParam& f);
  static PAdicElem from_int(const PrimeParam& f, int64_t n);
  /// num/den in lowest p-terms; den must be nonzero.
  static PAdicElem from_rational(const PrimeParam& f, int64_t num, int64_t den);
  /// a + b*pi with rational a = an/ad, b = bn/bd.
  static PAdicElem from_pair(const PrimeParam& f, int64_t an, int64_t ad,
                             int64_t bn, int64_t bd);

  bool is_zero() const { return zero_; }
  /// pi-adic valuation; throws DivisionByZero on zero.
  int64_t val_pi() const;
  /// True if the element is fixed by conjugation (lies in F0).
  bool in_f0() const;
  /// Unit part of an F0 element reduced mod p (for character evaluation).
  uint64_t unit_mod_p() const;

  PAdicElem conj() const;
  PAdicElem neg() const;
  PAdicElem add(const PAdicElem& o) const;
  PAdicElem sub(const PAdicElem& o) const;
  PAdicElem mul(const PAdicElem& o) const;
  PAdicElem inv() const;
  PAdicElem div(const PAdicElem& o) const;
  /// Multiply by pi^k (exact, cheap).
  PAdicElem shift(int64_t k) const;

  PAdicElem operator-() const { return neg(); }
  PAdicElem operator+(const PAdicElem& o) const { return add(o); }
  PAdicElem operator-(const PAdicElem& o) const { return sub(o); }
  PAdicElem operator*(const PAdicElem& o) const { return mul(o); }
  PAdicElem operator/(const PAdicElem& o) const { return div(o); }
  bool operator==(const PAdicElem& o) const { return sub(o).is_zero(); }
  bool operator!=(const PAdicElem& o) const { return !(*this == o); }

  /// x + conj(x), an element of F0.
  PAdicElem trace() const { return add(conj()); }
  /// x * conj(x), an element of F0.
  PAdicElem norm() const { return mul(conj()); }

  const PrimeParam& field() const;
  std::string to_string() const;

  // Raw accessors (canonical form), mainly for tests.
  uint64_t u0() const { return u0_; }
  uint64_t u1() const { return u1_; }
  int trusted() const { return t_; }

 private:
  PAdicElem(const PrimeParam* f, int64_t v, uint64_t u0, uint64_t u1, bool z, int t)
      : f_(f), v_(v), u0_(u0), u1_(u1), zero_(z), t_(t) {}
  static PAdicElem normalize(const PrimeParam* f, int64_t v, uint64_t a, uint64_t b, int t);

  const PrimeParam* f_ = nullptr;
  int64_t v_ = 0;
  uint64_t u0_ = 0, u1_ = 0;
  bool zero_ = true;
  int t_ = 0;
};

/// Norm character of F0^x: chi(p^k u) = chi(-1)^k * legendre(u, p), where
/// chi(-1) = legendre(-1, p).  Throws InvalidInput unless x is a nonzero
/// element of F0.
int chi(const PAdicElem& x);

/// Square root of a unit square in Z_p (val_pi = 0, in F0, legendre +1):
/// Tonelli-Shanks mod p followed by Hensel lifting to the full precision.
/// Throws InvalidInput if x is not a unit square of F0.
PAdicElem sqrt_unit(const PAdicElem& x);

}  // namespace ulat
