#pragma once
/*
 * Brute-force counting oracle over the finite quotients O_F / p^a O_F.
 *
 * Everything upstream (closed intersection numbers, density polynomials)
 * is grounded here by literally counting pairs of vectors with a
 * prescribed Gram matrix in a finite quotient of a Hermitian lattice and
 * normalizing.
 *
 * A Gram matrix of a pair (x, y) in an integral lattice (or its pi^{-1}
 * dual scale) is determined mod p^a by four residues
 *
 *     key = (t11, t22, c, e)  in  (Z/p^a)^4,   t12 = c + e * pi^{-1},
 *
 * since Hermitian diagonal entries lie in Z_p and off-diagonal entries in
 * pi^{-1} O_F = Z_p + pi^{-1} Z_p.  An integral t12 = u + v pi has
 * c = u, e = p v.  GramHistogram tabulates, for one rank-m lattice M and
 * one level a, the number of pairs in (M / p^a M)^2 realizing every key;
 * the histogram of a direct sum is the additive convolution of the
 * factors' histograms, which is how the hyperbolic towers L + H^r are
 * counted without enumerating rank-6 quotients.
 *
 * The normalized density of a class T in M is
 *
 *     count(key(T)) / p^{a * 2(2m-2)},
 *
 * the exponent being a*n(2m-n) with n = 2 columns; for rank-1 targets
 * (n = 1, m = 1) it is count / p^a.  Densities stabilize once a exceeds
 * the pi-adic conductor of the class; stabilized_density demands two
 * consecutive levels agree and reports BudgetExhausted otherwise.
 *
 * Enumeration cost is p^{8a} pairs for a rank-2 lattice, so levels are
 * capped by an explicit operation budget (default 2*10^8: p = 3 reaches
 * a = 2, p = 5 and 7 reach a = 1).  The parallel kernel partitions the
 * outer column loop across OpenMP threads with one private histogram
 * each, merged at the end; gram_histogram_serial is the plain reference
 * loop the parallel kernel is tested against.
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ulat/density.hpp"
#include "ulat/herm.hpp"
#include "ulat/padic.hpp"

namespace ulat {

struct BudgetExhausted : std::runtime_error {
  explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Gram residues mod p^a: t12 = c + e * pi^{-1} with each field in [0, p^a).
struct GramKey {
  int64_t t11 = 0, t22 = 0, c = 0, e = 0;
  bool operator==(const GramKey&) const = default;
};

/// Pair counts of one lattice at one level, indexed by GramKey.
struct GramHistogram {
  int64_t p = 0;
  int64_t a = 0;   // level: vectors live in M / p^a M
  int64_t pa = 0;  // p^a
  int64_t m = 0;   // O_F-rank of the lattice counted
  std::vector<int64_t> counts;  // size pa^4

  int64_t index(const GramKey& k) const {
    return ((k.t11 * pa + k.t22) * pa + k.c) * pa + k.e;
  }
  GramKey key_at(int64_t idx) const {
    GramKey k;
    k.e = idx % pa;
    idx /= pa;
    k.c = idx % pa;
    idx /= pa;
    k.t22 = idx % pa;
    k.t11 = idx / pa;
    return k;
  }
  int64_t at(const GramKey& k) const { return counts[index(k)]; }
  /// Sum of all counts; equals p^{4am}.
  int64_t total() const;
};

inline constexpr int64_t kDefaultOracleOps = 200000000;

/// Smallest positive integer v with chi(-v) = -1; diag(v0, 1) is the
/// anisotropic base plane L.
int64_t v0_of(const PrimeParam& f);

/// Key of the canonical representative Gram matrix of a class:
/// diag(-(-p)^alpha, (-p)^beta) for eps1 = +1, diag(v0 (-p)^alpha, (-p)^beta)
/// for eps1 = -1, and off-diagonal pi^n for anti-diagonal classes.  Throws
/// InvalidInput for classes outside the pi^{-1}-dual scale (diagonal
/// alpha < 0, anti-diagonal n < -1).
GramKey class_key(const PrimeParam& f, const TClass& cls, int64_t a);

/// Key of an explicit Hermitian matrix: diagonal entries in Z_p,
/// off-diagonal in pi^{-1} O_F (else InvalidInput).
GramKey key_of_gram(const PrimeParam& f, const Mat2& T, int64_t a);

/// Full pair count histogram of the rank-2 base lattice (L = diag(v0, 1)
/// or the hyperbolic plane H) at level a.  Throws BudgetExhausted when
/// p^{8a} exceeds max_ops.
GramHistogram gram_histogram(const PrimeParam& f, BaseLattice base, int64_t a,
                             int64_t max_ops = kDefaultOracleOps);
/// Reference implementation of the same count: one plain double loop.
GramHistogram gram_histogram_serial(const PrimeParam& f, BaseLattice base,
                                    int64_t a,
                                    int64_t max_ops = kDefaultOracleOps);
/// Direct enumeration of the rank-4 lattice L + H (no convolution),
/// feasible at a = 1 only; pins the convolution identity.
GramHistogram gram_histogram_rank4(const PrimeParam& f, int64_t a,
                                   int64_t max_ops = kDefaultOracleOps);

/// Histogram of a direct sum: additive convolution of keys.  Throws
/// BudgetExhausted if the combined counts could overflow 64 bits.
GramHistogram convolve(const GramHistogram& h1, const GramHistogram& h2);
/// Single entry of the convolution, exact (no overflow concern).
ZInt convolve_at(const GramHistogram& h1, const GramHistogram& h2,
                 const GramKey& key);

/// Rank-1 count: x in O_F / p^a with s * Nm(x) = t (mod p^a).
int64_t count_rank1(const PrimeParam& f, int64_t a, int64_t s, int64_t t);
/// count_rank1 normalized by p^a.
Rational density_rank1(const PrimeParam& f, int64_t a, int64_t s, int64_t t);

/// count / p^{a * 2(2m-2)} for a rank-m lattice and two columns.
Rational density_from_count(const ZInt& count, int64_t p, int64_t a,
                            int64_t m);

/// Smallest level a at which the Gram residues mod p^a pin down the class:
/// a > val_p(det T), i.e. alpha + beta + 1 for diagonal classes and n + 1
/// for anti-diagonal ones (floored at 1).  Below it the key collapses
/// (entries vanish mod p^a) and the count mixes in higher classes, which
/// can agree across consecutive coarse levels without being the density
/// of the class; agreement is only evidence of stabilization from this
/// level on.
int64_t faithful_level(const TClass& cls);

/// Normalized density of cls in base + H^r at level a (r <= 2).
Rational density_at_r(const PrimeParam& f, BaseLattice base, const TClass& cls,
                      int64_t r, int64_t a,
                      int64_t max_ops = kDefaultOracleOps);

/// First density value repeated at two consecutive faithful levels
/// faithful_level(cls) <= a <= a_max; throws BudgetExhausted if no such
/// pair of levels is affordable.
Rational stabilized_density(const PrimeParam& f, BaseLattice base,
                            const TClass& cls, int64_t r, int64_t a_max,
                            int64_t max_ops = kDefaultOracleOps);

}  // namespace ulat
