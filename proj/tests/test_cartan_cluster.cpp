#include <gtest/gtest.h>

#include <random>
#include <set>

#include "qcluster/cartan.hpp"
#include "qcluster/cluster.hpp"
#include "qcluster/krpoint.hpp"
#include "qcluster/qsystem.hpp"

using namespace qcluster;

namespace {

using P = LaurentPoly<Integer>;
using V = std::vector<std::size_t>;

P x(std::size_t n, std::size_t i, Exponent e = 1) { return P::variable(n, i, e); }
P one(std::size_t n) { return P::one(n); }

const std::vector<std::string> kAllTypes = {"A1", "A2", "A3", "A5", "B2", "B3", "B4", "C2", "C3", "C4",
                                            "D4", "D5", "E6", "E7", "E8", "F4", "G2"};

Seed<Integer> plain_seed(const IntMatrix& B) {
  Seed<Integer> s;
  for (std::size_t i = 0; i < B.rows(); ++i) s.x.push_back(x(B.rows(), i));
  s.B = B;
  return s;
}

}  // namespace

TEST(Cartan, A1) {
  const auto cd = build_cartan("A1");
  EXPECT_EQ(cd.C, IntMatrix::from_rows({{2}}));
  EXPECT_EQ(cd.t, (std::vector<int>{1}));
  EXPECT_TRUE(cd.short_roots.empty());
}

TEST(Cartan, G2) {
  const auto cd = build_cartan("G2");
  EXPECT_EQ(cd.C, IntMatrix::from_rows({{2, -1}, {-3, 2}}));
  EXPECT_EQ(cd.t, (std::vector<int>{1, 3}));
  EXPECT_EQ(cd.short_roots, (V{1}));
}

TEST(Cartan, B3) {
  const auto cd = build_cartan("B3");
  EXPECT_EQ(cd.C, IntMatrix::from_rows({{2, -1, 0}, {-1, 2, -1}, {0, -2, 2}}));
  EXPECT_EQ(cd.t, (std::vector<int>{1, 1, 2}));
  EXPECT_EQ(cd.short_roots, (V{2}));
}

TEST(Cartan, InvalidLabels) {
  for (const char* bad : {"B1", "C1", "D3", "E5", "E9", "F3", "G3", "H2", "A0", "A", "Ax", "A2x"}) {
    EXPECT_THROW(build_cartan(bad), InvalidType) << bad;
  }
}

TEST(Cartan, InvariantsForAllTypes) {
  for (const auto& label : kAllTypes) {
    const auto cd = build_cartan(label);
    const std::size_t r = cd.r();
    EXPECT_TRUE(cd.symmetrized().is_symmetric()) << label;
    std::set<std::size_t> parts(cd.short_roots.begin(), cd.short_roots.end());
    parts.insert(cd.long_roots.begin(), cd.long_roots.end());
    EXPECT_EQ(parts.size(), r) << label;
    EXPECT_EQ(cd.short_roots.size() + cd.long_roots.size(), r) << label;
    std::int64_t max_off = 0;
    for (std::size_t a = 0; a < r; ++a) {
      EXPECT_EQ(cd.C(a, a), 2);
      EXPECT_EQ(cd.t[a] > 1, cd.is_short(a)) << label;
      for (std::size_t b = 0; b < r; ++b) {
        if (a == b) continue;
        max_off = std::max(max_off, -cd.C(a, b));
        EXPECT_EQ(cd.adjacent(a, b), cd.adjacent(b, a));
        const bool listed = std::count(cd.neighbors[a].begin(), cd.neighbors[a].end(), b) > 0;
        EXPECT_EQ(listed, cd.C(a, b) != 0) << label;
      }
    }
    const std::int64_t expected = cd.simply_laced() ? (r > 1 ? 1 : 0) : (cd.type_label == 'G' ? 3 : 2);
    EXPECT_EQ(max_off, expected) << label;
  }
}

TEST(Cartan, SymmetrizerValues) {
  EXPECT_EQ(build_cartan("B4").t, (std::vector<int>{1, 1, 1, 2}));
  EXPECT_EQ(build_cartan("C4").t, (std::vector<int>{2, 2, 2, 1}));
  EXPECT_EQ(build_cartan("F4").t, (std::vector<int>{1, 1, 2, 2}));
}

TEST(Cartan, IndexSets) {
  const auto b3 = index_sets(build_cartan("B3"));
  EXPECT_EQ(b3.shorts, (V{2}));
  EXPECT_EQ(b3.longs, (V{0, 1}));
  EXPECT_EQ(b3.shorts_prime, (V{5}));
  EXPECT_EQ(b3.longs_prime, (V{3, 4}));
  EXPECT_EQ(b3.all_prime, (V{3, 4, 5}));

  const auto a2 = index_sets(build_cartan("A2"));
  EXPECT_TRUE(a2.shorts.empty());
  EXPECT_EQ(a2.all, (V{0, 1}));
  EXPECT_EQ(a2.all_prime, (V{2, 3}));

  const auto g2 = index_sets(build_cartan("G2"));
  EXPECT_EQ(g2.shorts, (V{1}));
  EXPECT_EQ(g2.shorts_prime, (V{3}));
  EXPECT_EQ(g2.all, (V{0, 1}));
  EXPECT_EQ(g2.all_prime, (V{2, 3}));
}

TEST(Cluster, A1MutationIsTheNormalizedStep) {
  const auto s = plain_seed(IntMatrix::from_rows({{0, -2}, {2, 0}}));
  const auto m = mutate(s, 0);
  // (R11^2 + 1) / R10
  EXPECT_EQ(m.x[0], x(2, 0, -1) * x(2, 1, 2) + x(2, 0, -1));
  EXPECT_EQ(m.x[1], s.x[1]);
  EXPECT_EQ(m.B, -s.B);
}

TEST(Cluster, IndexOutOfRange) {
  const auto s = plain_seed(IntMatrix::from_rows({{0, 1}, {-1, 0}}));
  EXPECT_THROW(mutate(s, 2), IndexOutOfRange);
}

TEST(Cluster, Involution) {
  const auto s = build_seed(build_cartan("B3"), Coefficients::Symbolic);
  for (std::size_t k = 0; k < s.n(); ++k) EXPECT_TRUE(seed_equal(mutate(mutate(s, k), k), s)) << k;
}

TEST(Cluster, RankTwoPentagon) {
  const auto s0 = plain_seed(IntMatrix::from_rows({{0, 1}, {-1, 0}}));
  const auto x1 = x(2, 0), x2 = x(2, 1);
  const std::vector<P> expected_new = {
      x(2, 0, -1) * (one(2) + x2),
      x(2, 0, -1) * x(2, 1, -1) * (one(2) + x1 + x2),
      x(2, 1, -1) * (one(2) + x1),
      x1,
      x2,
  };
  Seed<Integer> s = s0;
  std::vector<P> produced;
  for (std::size_t step = 0; step < 5; ++step) {
    const std::size_t k = step % 2;
    s = mutate(s, k);
    produced.push_back(s.x[k]);
  }
  EXPECT_EQ(produced, expected_new);
  // Five steps return the initial seed with positions swapped.
  Seed<Integer> swapped = s;
  std::swap(swapped.x[0], swapped.x[1]);
  swapped.B = IntMatrix::from_rows({{swapped.B(1, 1), swapped.B(1, 0)}, {swapped.B(0, 1), swapped.B(0, 0)}});
  EXPECT_TRUE(seed_equal(swapped, s0));
}

TEST(Cluster, CompoundA2FlipsSign) {
  const auto cd = build_cartan("A2");
  const auto s = build_seed(cd);
  const auto sets = index_sets(cd);
  const auto m = compound_mutate(s, std::span<const std::size_t>(sets.all));
  EXPECT_EQ(m.B, -s.B);
}

TEST(Cluster, CompoundEmptySetIsIdentity) {
  const auto s = build_seed(build_cartan("A2"));
  EXPECT_TRUE(seed_equal(compound_mutate(s, std::span<const std::size_t>()), s));
}

TEST(Cluster, CompoundB3SecondMatrix) {
  const auto cd = build_cartan("B3");
  const auto sets = index_sets(cd);
  auto s = compound_mutate(build_seed(cd), std::span<const std::size_t>(sets.shorts));
  s = compound_mutate(s, std::span<const std::size_t>(sets.longs));
  const IntMatrix A = cd.C.transpose() - cd.C;
  EXPECT_EQ(s.B, IntMatrix::blocks(A, cd.C - A, -cd.C.transpose() - A, 2 * A));
}

TEST(Cluster, NonCommutingSetRejected) {
  const auto s = build_seed(build_cartan("A2"));
  const V bad{0, 2};
  EXPECT_THROW(compound_mutate(s, std::span<const std::size_t>(bad)), NonCommutingSet);
}

TEST(Cluster, CoefficientsAreFrozen) {
  const auto s = build_seed(build_cartan("G2"), Coefficients::Symbolic);
  std::mt19937_64 rng(5);
  Seed<Integer> t = s;
  for (std::size_t k : random_path(t.n(), 6, rng)) {
    t = mutate(t, k);
    ASSERT_EQ(t.frozen_values, s.frozen_values);
  }
}

TEST(ClusterProperty, SkewSymmetryAfterRandomMutations) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    // Randomly oriented trees on at most 5 nodes are mutation-finite, so entries stay small.
    const std::size_t n = 3 + trial % 3;
    IntMatrix B(n, n);
    for (std::size_t v = 1; v < n; ++v) {
      const std::size_t parent = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
      const int sign = rng() % 2 ? 1 : -1;
      B(v, parent) = sign;
      B(parent, v) = -sign;
    }
    for (std::size_t k : random_path(n, 50, rng)) {
      B = detail::mutate_matrix(B, k);
      ASSERT_TRUE(B.is_skew_symmetric());
    }
  }
}

TEST(ClusterProperty, CommutingMutationsCommute) {
  std::mt19937_64 rng(22);
  for (const auto& label : {"A3", "B3", "C3", "G2"}) {
    const auto s = build_seed(build_cartan(label), Coefficients::Symbolic);
    for (std::size_t i = 0; i < s.n(); ++i)
      for (std::size_t j = i + 1; j < s.n(); ++j) {
        if (s.B(i, j) != 0) continue;
        EXPECT_TRUE(seed_equal(mutate(mutate(s, i), j), mutate(mutate(s, j), i))) << label << " " << i << "," << j;
      }
  }
}

TEST(ClusterProperty, LaurentOnRandomPathsRankAtMostThree) {
  std::mt19937_64 rng(23);
  for (const auto& label : {"A1", "A2", "B2", "G2", "A3", "B3", "C3"}) {
    const auto s0 = build_seed(build_cartan(label));
    for (int trial = 0; trial < 10; ++trial) {
      auto path = random_path(s0.n(), 1 + trial % 6, rng);
      if (!path_within(s0.B, path, 4)) continue;
      Seed<Integer> s = s0;
      for (std::size_t k : path) ASSERT_NO_THROW(s = mutate(s, k)) << label;
    }
  }
}
