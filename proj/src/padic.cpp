#include "ulat/padic.hpp"

#include <cstdlib>

namespace ulat {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a mod m for gcd(a, m) = 1, via extended Euclid on signed ints.
uint64_t invmod(uint64_t a, uint64_t m) {
  int64_t t = 0, nt = 1;
  int64_t r = static_cast<int64_t>(m), nr = static_cast<int64_t>(a % m);
  while (nr != 0) {
    int64_t qq = r / nr;
    int64_t tmp = t - qq * nt; t = nt; nt = tmp;
    tmp = r - qq * nr; r = nr; nr = tmp;
  }
  if (r != 1) throw DivisionByZero("invmod: argument not a unit");
  if (t < 0) t += static_cast<int64_t>(m);
  return static_cast<uint64_t>(t);
}

uint64_t reduce(int64_t n, uint64_t m) {
  int64_t r = n % static_cast<int64_t>(m);
  if (r < 0) r += static_cast<int64_t>(m);
  return static_cast<uint64_t>(r);
}

}  // namespace

PrimeParam PrimeParam::make(int64_t p, int digits) {
  if (p < 3 || p % 2 == 0) throw InvalidInput("PrimeParam: p must be an odd prime");
  for (int64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) throw InvalidInput("PrimeParam: p must be an odd prime");
  if (digits < 8) throw InvalidInput("PrimeParam: need at least 8 pi-adic digits");
  PrimeParam f;
  f.p = p;
  f.pi_digits = digits;
  int want = (digits + 1) / 2;
  // Largest K with p^K < 2^62, so that a product of residues fits __int128.
  const uint64_t cap = (uint64_t{1} << 62);
  int kmax = 0;
  uint64_t pw = 1;
  while (pw < cap / static_cast<uint64_t>(p)) {
    pw *= static_cast<uint64_t>(p);
    ++kmax;
  }
  f.K = want < kmax ? want : kmax;
  f.pk = 1;
  for (int i = 0; i < f.K; ++i) f.pk *= static_cast<uint64_t>(p);
  return f;
}

int legendre(int64_t a, int64_t p) {
  uint64_t r = reduce(a, static_cast<uint64_t>(p));
  if (r == 0) return 0;
  uint64_t e = powmod(r, static_cast<uint64_t>((p - 1) / 2), static_cast<uint64_t>(p));
  return e == 1 ? 1 : -1;
}

PAdicElem PAdicElem::zero(const PrimeParam& f) { return PAdicElem(&f, 0, 0, 0, true, f.K); }

PAdicElem PAdicElem::one(const PrimeParam& f) { return PAdicElem(&f, 0, 1, 0, false, f.K); }

PAdicElem PAdicElem::pi(const PrimeParam& f) { return PAdicElem(&f, 1, 1, 0, false, f.K); }

PAdicElem PAdicElem::normalize(const PrimeParam* f, int64_t v, uint64_t a, uint64_t b, int t) {
  const uint64_t p = static_cast<uint64_t>(f->p);
  if (a == 0 && b == 0) return PAdicElem(f, 0, 0, 0, true, t);
  // Pull shared powers of p out of the unit pair.  Each pull consumes one
  // trusted base-p digit: the divided residues acquire an unknown top digit.
  int pulled = 0;
  while (a % p == 0 && b % p == 0) {
    a /= p;
    b /= p;
    v += 2;
    if (++pulled >= t)
      // Every trusted digit of the pair was zero: the value is
      // indistinguishable from zero at the available precision.
      return PAdicElem(f, 0, 0, 0, true, t);
    if (a == 0 && b == 0) return PAdicElem(f, 0, 0, 0, true, t);
  }
  t -= pulled;
  if (a % p == 0) {
    // u0 + u1 pi = pi * (u1 + (u0/p) pi); only one component divides, so the
    // pair keeps t-1 trusted digits.
    uint64_t na = b, nb = a / p;
    a = na;
    b = nb;
    v += 1;
    t -= 1;
  }
  if (t < 1)
    throw PrecisionExhausted("normalize: no working digits remain trusted");
  if (v > 4000 || v < -4000)
    throw PrecisionExhausted("normalize: valuation outside the trusted range");
  return PAdicElem(f, v, a, b, false, t);
}

const PrimeParam& PAdicElem::field() const {
  if (f_ == nullptr) throw InvalidInput("PAdicElem: element has no field attached");
  return *f_;
}

PAdicElem PAdicElem::from_int(const PrimeParam& f, int64_t n) {
  return normalize(&f, 0, reduce(n, f.pk), 0, f.K);
}

PAdicElem PAdicElem::from_rational(const PrimeParam& f, int64_t num, int64_t den) {
  if (den == 0) throw DivisionByZero("from_rational: zero denominator");
  if (num == 0) return zero(f);
  int64_t v = 0;
  while (num % f.p == 0) { num /= f.p; v += 2; }
  while (den % f.p == 0) { den /= f.p; v -= 2; }
  uint64_t u = mulmod(reduce(num, f.pk), invmod(reduce(den, f.pk), f.pk), f.pk);
  return PAdicElem(&f, v, u, 0, false, f.K);
}

PAdicElem PAdicElem::from_pair(const PrimeParam& f, int64_t an, int64_t ad,
                               int64_t bn, int64_t bd) {
  return from_rational(f, an, ad).add(from_rational(f, bn, bd).mul(pi(f)));
}

int64_t PAdicElem::val_pi() const {
  if (zero_) throw DivisionByZero("val_pi: zero has no valuation");
  return v_;
}

bool PAdicElem::in_f0() const {
  if (zero_) return true;
  if (v_ % 2 != 0) return false;
  // The pi-component must vanish to the trusted precision (digits above t_
  // are phantoms left behind by renormalization).
  uint64_t pt = 1;
  for (int i = 0; i < t_; ++i) pt *= static_cast<uint64_t>(f_->p);
  return u1_ % pt == 0;
}

uint64_t PAdicElem::unit_mod_p() const {
  if (zero_) throw DivisionByZero("unit_mod_p: zero has no unit part");
  return u0_ % static_cast<uint64_t>(f_->p);
}

PAdicElem PAdicElem::conj() const {
  if (zero_) return *this;
  const uint64_t pk = f_->pk;
  bool odd = ((v_ % 2) + 2) % 2 == 1;
  uint64_t a = u0_, b = (pk - u1_) % pk;  // u0 - u1 pi
  if (odd) {                              // times (-1)^v
    a = (pk - a) % pk;
    b = (pk - b) % pk;
  }
  return PAdicElem(f_, v_, a, b, false, t_);
}

PAdicElem PAdicElem::neg() const {
  if (zero_) return *this;
  const uint64_t pk = f_->pk;
  return PAdicElem(f_, v_, (pk - u0_) % pk, (pk - u1_) % pk, false, t_);
}

PAdicElem PAdicElem::add(const PAdicElem& o) const {
  if (zero_) return o;
  if (o.zero_) return *this;
  if (f_ != o.f_) throw InvalidInput("add: mixed fields");
  const uint64_t p = static_cast<uint64_t>(f_->p), pk = f_->pk;
  int64_t v = v_ < o.v_ ? v_ : o.v_;
  // Re-express both unit pairs at the common valuation v: one pi-step maps
  // (a, b) to (p*b, a) because pi*(a + b pi) = p*b + a*pi.
  auto at = [&](const PAdicElem& x) {
    uint64_t a = x.u0_, b = x.u1_;
    for (int64_t k = x.v_ - v; k > 0; --k) {
      uint64_t na = mulmod(b, p, pk);
      b = a;
      a = na;
    }
    return std::pair<uint64_t, uint64_t>(a, b);
  };
  auto [a1, b1] = at(*this);
  auto [a2, b2] = at(o);
  int t = t_ < o.t_ ? t_ : o.t_;
  return normalize(f_, v, (a1 + a2) % pk, (b1 + b2) % pk, t);
}

PAdicElem PAdicElem::sub(const PAdicElem& o) const { return add(o.neg()); }

PAdicElem PAdicElem::mul(const PAdicElem& o) const {
  if (zero_ || o.zero_) return f_ ? zero(*f_) : (o.f_ ? zero(*o.f_) : PAdicElem());
  if (f_ != o.f_) throw InvalidInput("mul: mixed fields");
  const uint64_t p = static_cast<uint64_t>(f_->p), pk = f_->pk;
  // (a + b pi)(c + d pi) = (ac + p bd) + (ad + bc) pi; u0 stays a unit.
  uint64_t a = u0_, b = u1_, c = o.u0_, d = o.u1_;
  uint64_t r0 = (mulmod(a, c, pk) + mulmod(p, mulmod(b, d, pk), pk)) % pk;
  uint64_t r1 = (mulmod(a, d, pk) + mulmod(b, c, pk)) % pk;
  int t = t_ < o.t_ ? t_ : o.t_;
  return PAdicElem(f_, v_ + o.v_, r0, r1, false, t);
}

PAdicElem PAdicElem::inv() const {
  if (zero_) throw DivisionByZero("inv: division by zero");
  const uint64_t p = static_cast<uint64_t>(f_->p), pk = f_->pk;
  // (a + b pi)^-1 = (a - b pi) / (a^2 - p b^2); the denominator is a unit.
  uint64_t nm = (mulmod(u0_, u0_, pk) + pk - mulmod(p, mulmod(u1_, u1_, pk), pk)) % pk;
  uint64_t in = invmod(nm, pk);
  return PAdicElem(f_, -v_, mulmod(u0_, in, pk), mulmod((pk - u1_) % pk, in, pk), false, t_);
}

PAdicElem PAdicElem::div(const PAdicElem& o) const { return mul(o.inv()); }

PAdicElem PAdicElem::shift(int64_t k) const {
  if (zero_) return *this;
  return PAdicElem(f_, v_ + k, u0_, u1_, false, t_);
}

std::string PAdicElem::to_string() const {
  if (zero_) return "0";
  std::string s = "pi^" + std::to_string(v_) + "*(" + std::to_string(u0_);
  if (u1_ != 0) s += " + " + std::to_string(u1_) + "*pi";
  s += ")";
  return s;
}

int chi(const PAdicElem& x) {
  if (x.is_zero()) throw InvalidInput("chi: zero argument");
  if (!x.in_f0()) throw InvalidInput("chi: argument not in the base field");
  const int64_t p = x.field().p;
  int64_t k = x.val_pi() / 2;  // x = p^k * unit
  int s = legendre(static_cast<int64_t>(x.unit_mod_p()), p);
  if (k % 2 != 0) s *= legendre(-1, p);
  return s;
}

PAdicElem sqrt_unit(const PAdicElem& x) {
  if (x.is_zero() || !x.in_f0() || x.val_pi() != 0)
    throw InvalidInput("sqrt_unit: argument must be a unit of F0");
  const PrimeParam& f = x.field();
  const uint64_t p = static_cast<uint64_t>(f.p), pk = f.pk;
  const uint64_t u = x.u0();
  if (legendre(static_cast<int64_t>(u % p), f.p) != 1)
    throw InvalidInput("sqrt_unit: argument is not a square");

  // Tonelli-Shanks mod p.
  uint64_t up = u % p;
  uint64_t q = p - 1;
  int s = 0;
  while (q % 2 == 0) { q /= 2; ++s; }
  uint64_t z = 2;
  while (legendre(static_cast<int64_t>(z), f.p) != -1) ++z;
  uint64_t m = static_cast<uint64_t>(s);
  uint64_t c = powmod(z, q, p);
  uint64_t t = powmod(up, q, p);
  uint64_t r = powmod(up, (q + 1) / 2, p);
  while (t != 1) {
    uint64_t i = 0, tt = t;
    while (tt != 1) { tt = mulmod(tt, tt, p); ++i; }
    uint64_t b = c;
    for (uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }

  // Hensel / Newton lifting: r <- r - (r^2 - u) / (2r), doubling precision.
  uint64_t root = r;
  for (int it = 0; it < f.K + 2; ++it) {
    uint64_t num = (mulmod(root, root, pk) + pk - (u % pk)) % pk;
    uint64_t den = invmod((2 * root) % pk, pk);
    root = (root + pk - mulmod(num, den, pk)) % pk;
  }
  return PAdicElem::from_int(f, static_cast<int64_t>(root));
}

}  // namespace ulat
