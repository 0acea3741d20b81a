#include "ulat/tree.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <vector>

#include "ulat/herm.hpp"
#include "ulat/padic.hpp"

namespace ulat {
namespace {

Vec2 std_w0(const PrimeParam& f) { return {PAdicElem::one(f), PAdicElem::zero(f)}; }
Vec2 std_w1(const PrimeParam& f) { return {PAdicElem::zero(f), PAdicElem::one(f)}; }

// The standard normalized type-2 lattice < pi^{-1} w0, w1 >.
Lattice base_vertex(const PrimeParam& f) {
  return Lattice{std_w0(f).shift(-1), std_w1(f)};
}

PAdicElem rand_integral(const PrimeParam& f, std::mt19937_64& rng) {
  auto digit = [&]() { return static_cast<int64_t>(rng() % static_cast<uint64_t>(f.p * f.p)); };
  return PAdicElem::from_pair(f, digit(), 1, digit(), 1);
}

PAdicElem rand_unit(const PrimeParam& f, std::mt19937_64& rng) {
  int64_t u0 = 1 + static_cast<int64_t>(rng() % static_cast<uint64_t>(f.p - 1));
  int64_t u1 = static_cast<int64_t>(rng() % static_cast<uint64_t>(f.p));
  return PAdicElem::from_pair(f, u0, 1, u1, 1);
}

Vec2 rand_vec(const PrimeParam& f, std::mt19937_64& rng) {
  for (;;) {
    Vec2 v{rand_integral(f, rng), rand_integral(f, rng)};
    if (rng() % 4 == 0) v.c0 = PAdicElem::zero(f);
    if (!v.is_zero()) return v.shift(static_cast<int64_t>(rng() % 3));
  }
}

// Random vertex: a non-backtracking random walk from the base vertex.
Lattice rand_vertex(const PrimeParam& f, std::mt19937_64& rng, int max_steps = 5) {
  Lattice cur = base_vertex(f);
  Lattice prev = cur;
  int steps = static_cast<int>(rng() % static_cast<uint64_t>(max_steps + 1));
  for (int i = 0; i < steps; ++i) {
    std::vector<Lattice> nbrs = neighbors(cur);
    std::vector<Lattice> fresh;
    for (const Lattice& n : nbrs)
      if (i == 0 || !lattice_eq(n, prev)) fresh.push_back(n);
    prev = cur;
    cur = fresh[rng() % fresh.size()];
  }
  return cur;
}

// Random unimodular base change, as a word in elementary operations.
Lattice rebase(const Lattice& L, const PrimeParam& f, std::mt19937_64& rng) {
  Vec2 b0 = L.b0;
  Vec2 b1 = L.b1;
  int len = 3 + static_cast<int>(rng() % 5);
  for (int i = 0; i < len; ++i) {
    switch (rng() % 4) {
      case 0:
        std::swap(b0, b1);
        break;
      case 1:
        b0 = b0.add(b1.scale(rand_integral(f, rng)));
        break;
      case 2:
        b1 = b1.add(b0.scale(rand_integral(f, rng)));
        break;
      default:
        b0 = b0.scale(rand_unit(f, rng));
        break;
    }
  }
  return Lattice{b0, b1};
}

void expect_normalized(const Lattice& L, const PrimeParam& f) {
  Mat2 g = gram_lattice(L);
  PAdicElem pinv = PAdicElem::pi(f).inv();
  EXPECT_TRUE(g.a.is_zero());
  EXPECT_TRUE(g.d.is_zero());
  EXPECT_TRUE(g.b.sub(pinv).is_zero());
  EXPECT_TRUE(g.c.add(pinv).is_zero());
}

TEST(Tree, VertexTypePinnedExamples) {
  PrimeParam f = PrimeParam::make(3);
  Lattice self_dual{std_w0(f), std_w1(f)};
  EXPECT_EQ(vertex_type(self_dual), VertexType::Type0);
  EXPECT_EQ(vertex_type(base_vertex(f)), VertexType::Type2);
  Lattice shifted{std_w0(f), std_w1(f).shift(1)};
  EXPECT_EQ(vertex_type(shifted), VertexType::NotVertex);
  Lattice scaled{std_w0(f).shift(1), std_w1(f).shift(1)};
  EXPECT_EQ(vertex_type(scaled), VertexType::NotVertex);
}

TEST(Tree, NormalizeType2RecoversExactGram) {
  for (int64_t p : {3, 5}) {
    PrimeParam f = PrimeParam::make(p);
    std::mt19937_64 rng(2024 + static_cast<uint64_t>(p));
    for (int iter = 0; iter < 40; ++iter) {
      Lattice v = rand_vertex(f, rng);
      Lattice scrambled = rebase(v, f, rng);
      ASSERT_EQ(vertex_type(scrambled), VertexType::Type2);
      Lattice norm = normalize_type2(scrambled);
      expect_normalized(norm, f);
      EXPECT_TRUE(lattice_eq(norm, v));
    }
  }
}

TEST(Tree, NormalizeRejectsNonType2) {
  PrimeParam f = PrimeParam::make(3);
  EXPECT_THROW(normalize_type2(Lattice{std_w0(f), std_w1(f)}), InvalidInput);
}

TEST(Tree, NeighborsAreDistinctAdjacentAndNormalized) {
  for (int64_t p : {3, 5}) {
    PrimeParam f = PrimeParam::make(p);
    std::mt19937_64 rng(7 + static_cast<uint64_t>(p));
    for (int iter = 0; iter < 10; ++iter) {
      Lattice v = rand_vertex(f, rng);
      auto nbrs = neighbors_with_edges(v);
      ASSERT_EQ(nbrs.size(), static_cast<size_t>(p + 1));
      for (size_t i = 0; i < nbrs.size(); ++i) {
        const auto& [nbr, edge] = nbrs[i];
        expect_normalized(nbr, f);
        EXPECT_FALSE(lattice_eq(nbr, v));
        EXPECT_EQ(vertex_type(edge), VertexType::Type0);
        // the edge lattice lies in both endpoints
        for (const Vec2* b : {&edge.b0, &edge.b1}) {
          EXPECT_GE(n_of(*b, v), 0);
          EXPECT_GE(n_of(*b, nbr), 0);
        }
        for (size_t j = i + 1; j < nbrs.size(); ++j)
          EXPECT_FALSE(lattice_eq(nbr, nbrs[j].first));
      }
    }
  }
}

TEST(Tree, NPropagationAndEdgeMinRule) {
  for (int64_t p : {3, 5}) {
    PrimeParam f = PrimeParam::make(p);
    std::mt19937_64 rng(11 + static_cast<uint64_t>(p));
    for (int iter = 0; iter < 100; ++iter) {
      Lattice v = rand_vertex(f, rng);
      Vec2 x = rand_vec(f, rng);
      int64_t nv = n_of(x, v);
      for (const auto& [nbr, edge] : neighbors_with_edges(v)) {
        int64_t nn = n_of(x, nbr);
        EXPECT_LE(std::abs(nv - nn), 1);
        EXPECT_EQ(n_of(x, edge), std::min(nv, nn));
      }
    }
  }
}

TEST(Tree, EdgeSumIdentity) {
  for (int64_t p : {3, 5}) {
    PrimeParam f = PrimeParam::make(p);
    std::mt19937_64 rng(13 + static_cast<uint64_t>(p));
    for (int iter = 0; iter < 100; ++iter) {
      Lattice v = rand_vertex(f, rng);
      Vec2 x = rand_vec(f, rng);
      int64_t nv = n_of(x, v);
      int64_t total = 0;
      for (const auto& [nbr, edge] : neighbors_with_edges(v))
        total += n_of(x, edge) + 1 - nv;
      EXPECT_EQ(total, 1);
    }
  }
}

TEST(Tree, AnchorLatticeBasics) {
  for (int64_t p : {3, 5}) {
    PrimeParam f = PrimeParam::make(p);
    std::mt19937_64 rng(17 + static_cast<uint64_t>(p));
    for (int iter = 0; iter < 50; ++iter) {
      Vec2 x = rand_vec(f, rng);
      if (qform(x).is_zero()) continue;
      Lattice a = lambda_b(x);
      EXPECT_EQ(vertex_type(a), VertexType::Type0);
      EXPECT_EQ(n_of(x, a), qform(x).val_pi() / 2);
      // invariance under unit scaling and pi-shifts of the vector
      EXPECT_TRUE(lattice_eq(a, lambda_b(x.scale(rand_unit(f, rng)))));
      EXPECT_TRUE(lattice_eq(a, lambda_b(x.shift(2))));
      // the two endpoints are adjacent vertices containing the anchor
      auto [P, Q] = edge_endpoints(a);
      expect_normalized(P, f);
      expect_normalized(Q, f);
      EXPECT_FALSE(lattice_eq(P, Q));
      bool adjacent = false;
      for (const Lattice& n : neighbors(P)) adjacent |= lattice_eq(n, Q);
      EXPECT_TRUE(adjacent);
      for (const Vec2* b : {&a.b0, &a.b1}) {
        EXPECT_GE(n_of(*b, P), 0);
        EXPECT_GE(n_of(*b, Q), 0);
      }
    }
  }
}

TEST(Tree, BallCounts) {
  for (int64_t p : {3, 5}) {
    PrimeParam f = PrimeParam::make(p);
    Vec2 c1 = std_w0(f).add(std_w1(f));  // q = 2, a unit
    for (int64_t a = 0; a <= 3; ++a) {
      Vec2 x = c1.shift(a);
      auto [P, Q] = edge_endpoints(lambda_b(x));
      auto region = enumerate_region(
          {P, Q}, [&](const Lattice& L) { return n_of(x, L) >= 0; },
          TreeBudget{200000, a + 2});
      int64_t expect = 0;
      int64_t qa = 1;
      for (int64_t i = 0; i <= a; ++i, qa *= p) expect += qa;
      EXPECT_EQ(static_cast<int64_t>(region.size()), 2 * expect)
          << "p=" << p << " a=" << a;
    }
  }
}

TEST(Tree, DistanceLaw) {
  for (int64_t p : {3, 5}) {
    PrimeParam f = PrimeParam::make(p);
    // E_j = < pi^{-j} w0, pi^j w1 > is a geodesic chain of type-0 lattices:
    // E_j joins the vertices < pi^{-j} w0, pi^{j-1} w1 > and
    // < pi^{-j-1} w0, pi^j w1 >, so dist(E_i, E_j) = |i - j|.
    std::vector<Lattice> chain;
    for (int64_t j = 0; j <= 4; ++j)
      chain.push_back(Lattice{std_w0(f).shift(-j), std_w1(f).shift(j)});
    for (const Lattice& e : chain) ASSERT_EQ(vertex_type(e), VertexType::Type0);
    for (size_t i = 0; i < chain.size(); ++i)
      for (size_t j = 0; j < chain.size(); ++j)
        EXPECT_EQ(tree_distance(chain[i], chain[j]),
                  std::abs(static_cast<int64_t>(i) - static_cast<int64_t>(j)));
  }
}

int64_t diag_closed(int64_t q, int64_t alpha, int64_t beta) {
  int64_t geom = 0;
  int64_t qs = 1;
  for (int64_t s = 0; s < alpha; ++s, qs *= q) geom += qs;
  return alpha + beta - 2 * q * geom;
}

int64_t anti_closed(int64_t q, int64_t n) {
  int64_t geom = 0;
  int64_t qs = 1;
  for (int64_t s = 0; s < (n + 1) / 2; ++s, qs *= q) geom += qs;
  return -(q + 1) * geom + n + 1;
}

TEST(Tree, IntersectionPinnedValues) {
  PrimeParam f3 = PrimeParam::make(3);
  auto val3 = [&](const TClass& cls) {
    auto [x, y] = canonical_pair(f3, cls);
    return tree_intersection(x, y);
  };
  EXPECT_EQ(val3(TClass::diagonal(0, 0, +1)), 0);
  EXPECT_EQ(val3(TClass::diagonal(0, 1, +1)), 1);
  EXPECT_EQ(val3(TClass::diagonal(0, 3, +1)), 3);
  EXPECT_EQ(val3(TClass::diagonal(1, 1, +1)), -4);
  EXPECT_EQ(val3(TClass::diagonal(1, 2, +1)), -3);
  EXPECT_EQ(val3(TClass::diagonal(2, 2, +1)), -20);
  EXPECT_EQ(val3(TClass::antidiagonal(1)), -2);
  EXPECT_EQ(val3(TClass::antidiagonal(3)), -12);
  EXPECT_EQ(val3(TClass::antidiagonal(-1)), 0);  // non-integral Gram

  PrimeParam f5 = PrimeParam::make(5);
  auto val5 = [&](const TClass& cls) {
    auto [x, y] = canonical_pair(f5, cls);
    return tree_intersection(x, y);
  };
  EXPECT_EQ(val5(TClass::diagonal(1, 1, +1)), -8);
  EXPECT_EQ(val5(TClass::antidiagonal(1)), -4);
}

TEST(Tree, IntersectionMatchesClosedFormOnGrid) {
  PrimeParam f = PrimeParam::make(3);
  for (int64_t alpha = 0; alpha <= 2; ++alpha)
    for (int64_t beta = alpha; beta <= 2; ++beta) {
      auto [x, y] = canonical_pair(f, TClass::diagonal(alpha, beta, +1));
      EXPECT_EQ(tree_intersection(x, y), diag_closed(3, alpha, beta));
      EXPECT_EQ(tree_intersection(y, x), diag_closed(3, alpha, beta));
    }
  for (int64_t n : {1, 3}) {
    auto [x, y] = canonical_pair(f, TClass::antidiagonal(n));
    EXPECT_EQ(tree_intersection(x, y), anti_closed(3, n));
    EXPECT_EQ(tree_intersection(y, x), anti_closed(3, n));
  }
}

TEST(Tree, IntersectionIsCongruenceInvariant) {
  PrimeParam f = PrimeParam::make(3);
  std::mt19937_64 rng(41);
  std::vector<TClass> classes = {TClass::diagonal(1, 1, +1), TClass::diagonal(0, 2, +1),
                                 TClass::antidiagonal(1), TClass::antidiagonal(3)};
  for (const TClass& cls : classes) {
    auto [x0, y0] = canonical_pair(f, cls);
    int64_t expect = tree_intersection(x0, y0);
    for (int iter = 0; iter < 5; ++iter) {
      auto [x, y] = randomize_pair(f, x0, y0, rng, /*congruence=*/true);
      EXPECT_EQ(tree_intersection(x, y), expect) << cls.to_string();
    }
  }
}

TEST(Tree, IntersectionRejectsDegeneratePairs) {
  PrimeParam f = PrimeParam::make(3);
  Vec2 x = std_w0(f).add(std_w1(f));
  EXPECT_THROW(tree_intersection(x, x.scale(PAdicElem::from_int(f, 7))), InvalidClass);
}

TEST(Tree, ClassFromTreeMatchesClassify) {
  for (int64_t p : {3, 5}) {
    PrimeParam f = PrimeParam::make(p);
    std::mt19937_64 rng(59 + static_cast<uint64_t>(p));
    std::vector<TClass> classes;
    for (int64_t alpha = 0; alpha <= 2; ++alpha)
      for (int64_t beta = alpha; beta <= 2; ++beta)
        classes.push_back(TClass::diagonal(alpha, beta, +1));
    classes.push_back(TClass::antidiagonal(1));
    classes.push_back(TClass::antidiagonal(3));
    for (const TClass& cls : classes) {
      auto [x0, y0] = canonical_pair(f, cls);
      int hit = 0;
      while (hit < 12) {
        auto [x, y] = randomize_pair(f, x0, y0, rng, /*congruence=*/true);
        if (qform(x).is_zero() || qform(y).is_zero()) continue;
        ++hit;
        TClass via_tree = tclass_from_tree(x, y);
        TClass via_gram = classify(gram_pair(x, y));
        EXPECT_TRUE(via_tree == via_gram)
            << cls.to_string() << ": tree " << via_tree.to_string() << " vs gram "
            << via_gram.to_string();
      }
    }
  }
}

TEST(Tree, ClassFromTreeAdjacentAnchors) {
  // Two unit-norm vectors with adjacent anchors: the Gram matrix has an
  // off-diagonal entry of valuation -1, so the class is AntiDiagonal(-1).
  PrimeParam f = PrimeParam::make(3);
  Vec2 x = std_w0(f).add(std_w1(f));
  Vec2 y = std_w0(f).shift(-1).add(std_w1(f).shift(1));
  ASSERT_EQ(qform(y).val_pi(), 0);
  TClass cls = tclass_from_tree(x, y);
  EXPECT_TRUE(cls == classify(gram_pair(x, y)));
  EXPECT_TRUE(cls == TClass::antidiagonal(-1));
}

TEST(Tree, ClassFromTreeRejectsIsotropicInput) {
  PrimeParam f = PrimeParam::make(3);
  EXPECT_THROW(tclass_from_tree(std_w0(f), std_w1(f)), InvalidInput);
}

TEST(Tree, RegionBudgetsAreEnforced) {
  PrimeParam f = PrimeParam::make(3);
  Vec2 x = std_w0(f).add(std_w1(f)).shift(3);
  auto [P, Q] = edge_endpoints(lambda_b(x));
  auto include = [&](const Lattice& L) { return n_of(x, L) >= 0; };
  EXPECT_THROW(enumerate_region({P, Q}, include, TreeBudget{5, -1}), RegionExceeded);
  EXPECT_THROW(enumerate_region({P, Q}, include, TreeBudget{100000, 1}), RegionExceeded);
  EXPECT_NO_THROW(enumerate_region({P, Q}, include, TreeBudget{100000, 4}));
  // a seed that fails the predicate is rejected outright
  EXPECT_THROW(enumerate_region({P}, [](const Lattice&) { return false; },
                                TreeBudget{}),
               InvalidInput);
}

}  // namespace
}  // namespace ulat
