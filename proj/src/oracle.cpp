#include "ulat/oracle.hpp"

#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ulat {

namespace {

int64_t ipow64(int64_t b, int64_t e) {
  int64_t r = 1;
  for (int64_t i = 0; i < e; ++i) r *= b;
  return r;
}

int64_t mod_pos(int64_t x, int64_t pa) { return ((x % pa) + pa) % pa; }

/// Residues (x0, x1) with z = x0 + x1 * pi (mod p^a), from the canonical
/// shape z = pi^v (u0 + u1 pi).  Requires z integral.
std::pair<int64_t, int64_t> residues_mod(const PrimeParam& f,
                                         const PAdicElem& z, int64_t a,
                                         int64_t pa) {
  if (z.is_zero()) return {0, 0};
  const int64_t v = z.val_pi();
  if (v < 0) throw InvalidInput("key_of_gram: entry is not integral");
  const int64_t w = v / 2;
  int64_t pw = 1;
  for (int64_t i = 0; i < (w < a ? w : a); ++i) pw *= f.p;
  const int64_t u0r = static_cast<int64_t>(z.u0() % static_cast<uint64_t>(pa));
  const int64_t u1r = static_cast<int64_t>(z.u1() % static_cast<uint64_t>(pa));
  if (v % 2 == 0) return {u0r * pw % pa, u1r * pw % pa};
  // pi^{2w+1} (u0 + u1 pi) = p^{w+1} u1 + p^w u0 pi
  return {u1r * pw % pa * f.p % pa, u0r * pw % pa};
}

/// One column of a rank-2 quotient: x = (u1 + v1 pi) f1 + (u2 + v2 pi) f2,
/// with its diagonal Gram value q(x) already reduced mod p^a.
struct Col {
  int64_t u1, v1, u2, v2, qd;
};

std::vector<Col> build_cols(const PrimeParam& f, BaseLattice base, int64_t a,
                            int64_t pa, int64_t v0) {
  const int64_t p = f.p;
  std::vector<Col> cols;
  cols.reserve(static_cast<size_t>(pa * pa * pa * pa));
  for (int64_t u1 = 0; u1 < pa; ++u1)
    for (int64_t v1 = 0; v1 < pa; ++v1)
      for (int64_t u2 = 0; u2 < pa; ++u2)
        for (int64_t v2 = 0; v2 < pa; ++v2) {
          int64_t qd;
          if (base == BaseLattice::L)
            qd = v0 * (u1 * u1 - p * v1 * v1) + (u2 * u2 - p * v2 * v2);
          else
            qd = 2 * (u2 * v1 - u1 * v2);
          cols.push_back({u1, v1, u2, v2, mod_pos(qd, pa)});
        }
  return cols;
}

/// herm(x, y) = c + e * pi^{-1} mod p^a, base L = diag(v0, 1):
/// x1 conj(y1) = (u1 a1 - p v1 b1) + (v1 a1 - u1 b1) pi.
inline void pair_key_L(const Col& x, const Col& y, int64_t p, int64_t pa,
                       int64_t v0, int64_t& c, int64_t& e) {
  c = mod_pos(v0 * (x.u1 * y.u1 - p * x.v1 * y.v1) +
                  (x.u2 * y.u2 - p * x.v2 * y.v2),
              pa);
  e = mod_pos(p * (v0 * (x.v1 * y.u1 - x.u1 * y.v1) +
                   (x.v2 * y.u2 - x.u2 * y.v2)),
              pa);
}

/// Base H with Gram pi^{-1} [[0, 1], [-1, 0]]:
/// herm(x, y) = pi^{-1} [ (x1 conj(y2) - x2 conj(y1)) ].
inline void pair_key_H(const Col& x, const Col& y, int64_t p, int64_t pa,
                       int64_t& c, int64_t& e) {
  c = mod_pos(x.v1 * y.u2 - x.u1 * y.v2 - x.v2 * y.u1 + x.u2 * y.v1, pa);
  e = mod_pos(x.u1 * y.u2 - x.u2 * y.u1 - p * (x.v1 * y.v2 - x.v2 * y.v1),
              pa);
}

void accumulate_rows(const std::vector<Col>& cols, int64_t lo, int64_t hi,
                     const PrimeParam& f, BaseLattice base, int64_t pa,
                     int64_t v0, std::vector<int64_t>& counts) {
  const int64_t p = f.p;
  const int64_t n = static_cast<int64_t>(cols.size());
  for (int64_t i = lo; i < hi; ++i) {
    const Col& x = cols[static_cast<size_t>(i)];
    const int64_t base_idx = x.qd * pa;
    for (int64_t j = 0; j < n; ++j) {
      const Col& y = cols[static_cast<size_t>(j)];
      int64_t c, e;
      if (base == BaseLattice::L)
        pair_key_L(x, y, p, pa, v0, c, e);
      else
        pair_key_H(x, y, p, pa, c, e);
      ++counts[static_cast<size_t>(((base_idx + y.qd) * pa + c) * pa + e)];
    }
  }
}

void check_budget(int64_t pa, int64_t columns_exp, int64_t max_ops) {
  ZInt ops = 1;
  for (int64_t i = 0; i < 2 * columns_exp; ++i) ops *= pa;
  if (ops > max_ops)
    throw BudgetExhausted("gram histogram: p^(a*columns) pair enumeration "
                          "exceeds the operation budget");
}

GramHistogram make_hist(const PrimeParam& f, int64_t a, int64_t m) {
  GramHistogram h;
  h.p = f.p;
  h.a = a;
  h.pa = ipow64(f.p, a);
  h.m = m;
  h.counts.assign(static_cast<size_t>(h.pa * h.pa * h.pa * h.pa), 0);
  return h;
}

}  // namespace

int64_t GramHistogram::total() const {
  int64_t t = 0;
  for (int64_t c : counts) t += c;
  return t;
}

int64_t v0_of(const PrimeParam& f) {
  for (int64_t v = 1; v < f.p; ++v)
    if (legendre(mod_pos(-v, f.p), f.p) == -1) return v;
  throw InvalidInput("v0_of: no non-norm unit below p");
}

GramKey class_key(const PrimeParam& f, const TClass& cls, int64_t a) {
  const int64_t pa = ipow64(f.p, a);
  if (cls.kind == TClass::Diagonal) {
    if (cls.alpha < 0)
      throw InvalidInput("class_key: diagonal class with alpha < 0 has no "
                         "integral representative");
    const int64_t s1 = cls.eps1 == +1 ? -1 : v0_of(f);
    int64_t d1 = mod_pos(s1, pa), d2 = 1;
    for (int64_t i = 0; i < cls.alpha; ++i) d1 = mod_pos(d1 * -f.p, pa);
    for (int64_t i = 0; i < cls.beta; ++i) d2 = mod_pos(d2 * -f.p, pa);
    return {d1, d2, 0, 0};
  }
  if (cls.n < -1)
    throw InvalidInput("class_key: anti-diagonal class below n = -1 is not "
                       "pi^{-1}-dual integral");
  const int64_t r = (cls.n + 1) / 2;
  int64_t e = 1;
  for (int64_t i = 0; i < r; ++i) e = mod_pos(e * f.p, pa);
  return {0, 0, 0, e};
}

GramKey key_of_gram(const PrimeParam& f, const Mat2& T, int64_t a) {
  const int64_t pa = ipow64(f.p, a);
  if ((!T.a.is_zero() && !T.a.in_f0()) || (!T.d.is_zero() && !T.d.in_f0()))
    throw InvalidInput("key_of_gram: diagonal entries must lie in F0");
  const auto [d1, d1x] = residues_mod(f, T.a, a, pa);
  const auto [d2, d2x] = residues_mod(f, T.d, a, pa);
  (void)d1x;
  (void)d2x;
  // t12 = c + e pi^{-1}  <=>  t12 * pi = e + c pi.
  const auto [e, c] = residues_mod(f, T.b.mul(PAdicElem::pi(f)), a, pa);
  return {d1, d2, c, e};
}

GramHistogram gram_histogram_serial(const PrimeParam& f, BaseLattice base,
                                    int64_t a, int64_t max_ops) {
  GramHistogram h = make_hist(f, a, 2);
  check_budget(h.pa, 4, max_ops);
  const int64_t v0 = v0_of(f);
  const std::vector<Col> cols = build_cols(f, base, a, h.pa, v0);
  accumulate_rows(cols, 0, static_cast<int64_t>(cols.size()), f, base, h.pa,
                  v0, h.counts);
  return h;
}

GramHistogram gram_histogram(const PrimeParam& f, BaseLattice base, int64_t a,
                             int64_t max_ops) {
  GramHistogram h = make_hist(f, a, 2);
  check_budget(h.pa, 4, max_ops);
  const int64_t v0 = v0_of(f);
  const std::vector<Col> cols = build_cols(f, base, a, h.pa, v0);
  const int64_t n = static_cast<int64_t>(cols.size());
#if defined(_OPENMP)
#pragma omp parallel
  {
    std::vector<int64_t> local(h.counts.size(), 0);
#pragma omp for schedule(static)
    for (int64_t i = 0; i < n; ++i)
      accumulate_rows(cols, i, i + 1, f, base, h.pa, v0, local);
#pragma omp critical
    {
      for (size_t k = 0; k < local.size(); ++k) h.counts[k] += local[k];
    }
  }
#else
  accumulate_rows(cols, 0, n, f, base, h.pa, v0, h.counts);
#endif
  return h;
}

GramHistogram gram_histogram_rank4(const PrimeParam& f, int64_t a,
                                   int64_t max_ops) {
  GramHistogram h = make_hist(f, a, 4);
  check_budget(h.pa, 8, max_ops);
  const int64_t p = f.p, pa = h.pa;
  const int64_t v0 = v0_of(f);
  // One rank-4 column = an L-column glued to an H-column; Gram data adds.
  const std::vector<Col> colsL = build_cols(f, BaseLattice::L, a, pa, v0);
  const std::vector<Col> colsH = build_cols(f, BaseLattice::H, a, pa, v0);
  const int64_t n = static_cast<int64_t>(colsL.size());
  for (int64_t i1 = 0; i1 < n; ++i1)
    for (int64_t i2 = 0; i2 < n; ++i2) {
      const Col& xl = colsL[static_cast<size_t>(i1)];
      const Col& xh = colsH[static_cast<size_t>(i2)];
      const int64_t t11 = (xl.qd + xh.qd) % pa;
      for (int64_t j1 = 0; j1 < n; ++j1)
        for (int64_t j2 = 0; j2 < n; ++j2) {
          const Col& yl = colsL[static_cast<size_t>(j1)];
          const Col& yh = colsH[static_cast<size_t>(j2)];
          int64_t cl, el, ch, eh;
          pair_key_L(xl, yl, p, pa, v0, cl, el);
          pair_key_H(xh, yh, p, pa, ch, eh);
          const int64_t t22 = (yl.qd + yh.qd) % pa;
          const int64_t c = (cl + ch) % pa, e = (el + eh) % pa;
          ++h.counts[static_cast<size_t>(((t11 * pa + t22) * pa + c) * pa +
                                         e)];
        }
    }
  return h;
}

GramHistogram convolve(const GramHistogram& h1, const GramHistogram& h2) {
  if (h1.p != h2.p || h1.a != h2.a)
    throw InvalidInput("convolve: histograms at different levels");
  ZInt tot = ZInt(h1.total()) * h2.total();
  if (tot >= (ZInt(1) << 62))
    throw BudgetExhausted("convolve: combined counts would overflow; use "
                          "convolve_at for single entries");
  GramHistogram out = make_hist(PrimeParam::make(h1.p), h1.a, h1.m + h2.m);
  const int64_t pa = h1.pa;
  const int64_t size = static_cast<int64_t>(out.counts.size());
  for (int64_t i = 0; i < size; ++i) {
    const int64_t c1 = h1.counts[static_cast<size_t>(i)];
    if (c1 == 0) continue;
    const GramKey k1 = h1.key_at(i);
    for (int64_t j = 0; j < size; ++j) {
      const int64_t c2 = h2.counts[static_cast<size_t>(j)];
      if (c2 == 0) continue;
      const GramKey k2 = h2.key_at(j);
      const GramKey k{(k1.t11 + k2.t11) % pa, (k1.t22 + k2.t22) % pa,
                      (k1.c + k2.c) % pa, (k1.e + k2.e) % pa};
      out.counts[static_cast<size_t>(out.index(k))] += c1 * c2;
    }
  }
  return out;
}

ZInt convolve_at(const GramHistogram& h1, const GramHistogram& h2,
                 const GramKey& key) {
  if (h1.p != h2.p || h1.a != h2.a)
    throw InvalidInput("convolve_at: histograms at different levels");
  const int64_t pa = h1.pa;
  const int64_t size = static_cast<int64_t>(h1.counts.size());
  ZInt acc = 0;
  for (int64_t i = 0; i < size; ++i) {
    const int64_t c1 = h1.counts[static_cast<size_t>(i)];
    if (c1 == 0) continue;
    const GramKey k1 = h1.key_at(i);
    const GramKey k2{mod_pos(key.t11 - k1.t11, pa),
                     mod_pos(key.t22 - k1.t22, pa), mod_pos(key.c - k1.c, pa),
                     mod_pos(key.e - k1.e, pa)};
    const int64_t c2 = h2.at(k2);
    if (c2 != 0) acc += ZInt(c1) * c2;
  }
  return acc;
}

int64_t count_rank1(const PrimeParam& f, int64_t a, int64_t s, int64_t t) {
  const int64_t pa = ipow64(f.p, a);
  int64_t cnt = 0;
  for (int64_t u = 0; u < pa; ++u)
    for (int64_t v = 0; v < pa; ++v)
      if (mod_pos(s * (u * u - f.p * v * v) - t, pa) == 0) ++cnt;
  return cnt;
}

Rational density_rank1(const PrimeParam& f, int64_t a, int64_t s, int64_t t) {
  ZInt den = 1;
  for (int64_t i = 0; i < a; ++i) den *= f.p;
  return Rational(count_rank1(f, a, s, t)) / Rational(den);
}

Rational density_from_count(const ZInt& count, int64_t p, int64_t a,
                            int64_t m) {
  ZInt den = 1;
  for (int64_t i = 0; i < a * 2 * (2 * m - 2); ++i) den *= p;
  return Rational(count) / Rational(den);
}

Rational density_at_r(const PrimeParam& f, BaseLattice base, const TClass& cls,
                      int64_t r, int64_t a, int64_t max_ops) {
  if (r < 0 || r > 2)
    throw InvalidInput("density_at_r: tower index must be 0, 1 or 2");
  const GramKey key = class_key(f, cls, a);
  const GramHistogram hb = gram_histogram(f, base, a, max_ops);
  ZInt count;
  if (r == 0) {
    count = hb.at(key);
  } else {
    const GramHistogram hH = gram_histogram(f, BaseLattice::H, a, max_ops);
    count = r == 1 ? convolve_at(hb, hH, key)
                   : convolve_at(hb, convolve(hH, hH), key);
  }
  return density_from_count(count, f.p, a, 2 + 2 * r);
}

int64_t faithful_level(const TClass& cls) {
  const int64_t det_val =
      cls.kind == TClass::Diagonal ? cls.alpha + cls.beta : cls.n;
  return det_val + 1 > 1 ? det_val + 1 : 1;
}

Rational stabilized_density(const PrimeParam& f, BaseLattice base,
                            const TClass& cls, int64_t r, int64_t a_max,
                            int64_t max_ops) {
  Rational prev;
  bool have = false;
  for (int64_t a = faithful_level(cls); a <= a_max; ++a) {
    Rational cur;
    try {
      cur = density_at_r(f, base, cls, r, a, max_ops);
    } catch (const BudgetExhausted&) {
      break;
    }
    if (have && cur == prev) return cur;
    prev = cur;
    have = true;
  }
  throw BudgetExhausted("stabilized_density: no two consecutive affordable "
                        "levels agree");
}

}  // namespace ulat
