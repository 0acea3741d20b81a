#pragma once
/*
 * The split Hermitian plane C = F w0 + F w1 over the ramified quadratic
 * extension F = F0(pi), with Gram matrix [[0,1],[1,0]] in the basis (w0, w1)
 * and the convention that the form is linear in the FIRST slot:
 *
 *     (a w0 + b w1, c w0 + d w1) = a conj(d) + b conj(c),
 *     q(x) = (x, x) = Tr(a conj(b))  for x = a w0 + b w1.
 *
 * A nondegenerate Hermitian 2x2 matrix T over F decomposes, up to integral
 * congruence T -> A^* T A with A in GL_2(O_F), into exactly one of two
 * families:
 *
 *   Diagonal(alpha <= beta, eps1):  diag(u1 (-p)^alpha, u2 (-p)^beta) with
 *       units u1, u2 and eps1 = chi(-det T) in {+1, -1} (well defined
 *       because -p is a norm, so chi kills even powers of pi in det);
 *   AntiDiagonal(n odd):  [[0, pi^n], [(-pi)^n, 0]].
 *
 * The classification rule implemented here: let v_d be the minimum pi-adic
 * valuation of the two diagonal entries (+infinity if both vanish) and v_o
 * the valuation of the off-diagonal entry.  If v_o is odd and v_o < v_d the
 * class is AntiDiagonal(v_o).  Otherwise the minimum mu = min(v_d, v_o) is
 * even, alpha = mu/2, beta = val_pi(det T)/2 - alpha, and eps1 = chi(-det T).
 *
 * Classes with eps1 = -1 are not represented by any pair of vectors in the
 * split plane C (canonical_pair throws NotRepresentable for them); classes
 * represented in C always classify with eps1 = +1.
 */

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "ulat/padic.hpp"

namespace ulat {

struct NotRepresentable : std::runtime_error {
  explicit NotRepresentable(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidClass : std::runtime_error {
  explicit InvalidClass(const std::string& what) : std::runtime_error(what) {}
};

/// A vector a*w0 + b*w1 of the split plane C.
struct Vec2 {
  PAdicElem c0, c1;
  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  Vec2 add(const Vec2& o) const { return {c0.add(o.c0), c1.add(o.c1)}; }
  Vec2 sub(const Vec2& o) const { return {c0.sub(o.c0), c1.sub(o.c1)}; }
  Vec2 scale(const PAdicElem& s) const { return {s.mul(c0), s.mul(c1)}; }
  Vec2 shift(int64_t k) const { return {c0.shift(k), c1.shift(k)}; }
  Vec2 neg() const { return {c0.neg(), c1.neg()}; }
};

/// Hermitian pairing of C, linear in the first slot.
PAdicElem herm(const Vec2& x, const Vec2& y);
/// q(x) = (x, x); always lands in F0.
PAdicElem qform(const Vec2& x);

/// A 2x2 matrix over F (rows first).
struct Mat2 {
  PAdicElem a, b, c, d;
  PAdicElem det() const { return a.mul(d).sub(b.mul(c)); }
  Mat2 conj_transpose() const { return {a.conj(), c.conj(), b.conj(), d.conj()}; }
  Mat2 mul(const Mat2& o) const;
};

/// Gram matrix [[ (x,x), (x,y) ], [ (y,x), (y,y) ]] of a pair.
Mat2 gram_pair(const Vec2& x, const Vec2& y);

/// Congruence class of a nondegenerate Hermitian 2x2 matrix.
struct TClass {
  enum Kind { Diagonal, AntiDiagonal } kind = Diagonal;
  int64_t alpha = 0, beta = 0;  // Diagonal, alpha <= beta
  int eps1 = +1;                // Diagonal
  int64_t n = 1;                // AntiDiagonal, odd

  static TClass diagonal(int64_t alpha, int64_t beta, int eps1);
  static TClass antidiagonal(int64_t n);
  bool integral() const {
    return kind == Diagonal ? alpha >= 0 : n >= 1;
  }
  bool operator==(const TClass& o) const;
  std::string to_string() const;
};

/// Classify a Hermitian matrix; throws InvalidClass if T is not Hermitian
/// (diagonal in F0, t21 = conj(t12)) or is degenerate.
TClass classify(const Mat2& T);

/// A canonical pair of vectors in C whose Gram matrix lies in the given
/// class.  Throws NotRepresentable for Diagonal classes with eps1 = -1
/// (and for the never-represented degenerate inputs).
std::pair<Vec2, Vec2> canonical_pair(const PrimeParam& f, const TClass& cls);

/// Randomize a pair without leaving its congruence class: applies a random
/// word of isometries of (C, herm) -- which fix the Gram matrix exactly --
/// and a random GL_2(O_F) combination of the two vectors -- which moves the
/// Gram matrix by an integral congruence.
std::pair<Vec2, Vec2> randomize_pair(const PrimeParam& f, const Vec2& x, const Vec2& y,
                                     std::mt19937_64& rng, bool congruence = true);

/// Replace an independent pair whose Gram matrix lies in a Diagonal class
/// by an orthogonal pair spanning the same O_F-lattice.  One of x, y,
/// x + y attains the minimal norm valuation 2*alpha of the class (all
/// three transitions are unimodular), and projecting the other vector off
/// it keeps the pair integral because 2*alpha also bounds the valuations
/// of the Gram entries.  Returns (e1, e2) with (e1, e2) = 0 and
/// val q(e1) = 2*alpha <= val q(e2).  Throws InvalidClass if the pair is
/// degenerate or anti-diagonal (no orthogonal basis exists).
std::pair<Vec2, Vec2> orthogonalize_pair(const Vec2& x, const Vec2& y);

/// An O_F-lattice in C given by a basis.
struct Lattice {
  Vec2 b0, b1;
};

/// n(x, L) = the largest n with x in pi^n L; INT64_MIN never returned for
/// x != 0 (throws InvalidInput on x = 0 or a degenerate basis).
int64_t n_of(const Vec2& x, const Lattice& L);

/// Solve x = s b0 + t b1 for (s, t).
std::pair<PAdicElem, PAdicElem> coords_in(const Vec2& x, const Lattice& L);

bool lattice_eq(const Lattice& A, const Lattice& B);

/// Gram matrix of the basis of L.
Mat2 gram_lattice(const Lattice& L);

/// Dual basis: vectors (d0, d1) with (d_i, b_j) = delta_ij; the O_F-span of
/// (d0, d1) is the dual lattice L^sharp.
Lattice dual_basis(const Lattice& L);

}  // namespace ulat
