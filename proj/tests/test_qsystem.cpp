#include <gtest/gtest.h>

#include "qcluster/qsystem.hpp"

using namespace qcluster;

namespace {

using P = LaurentPoly<Integer>;
using V = std::vector<std::size_t>;

P gen(std::size_t n, std::size_t i, Exponent e = 1) { return P::variable(n, i, e); }
P c(std::size_t n, long v) { return P::constant(n, Integer(v)); }

std::vector<QIndex> idx(std::initializer_list<std::pair<std::size_t, long>> l) { return {l.begin(), l.end()}; }

}  // namespace

TEST(QSystem, G2ExchangeMatrix) {
  EXPECT_EQ(exchange_matrix(build_cartan("G2")),
            IntMatrix::from_rows({{0, -2, -2, 3}, {2, 0, 1, -2}, {2, -1, 0, 0}, {-3, 2, 0, 0}}));
}

TEST(QSystem, A2ExchangeMatrix) {
  EXPECT_EQ(exchange_matrix(build_cartan("A2")),
            IntMatrix::from_rows({{0, 0, -2, 1}, {0, 0, 1, -2}, {2, -1, 0, 0}, {-1, 2, 0, 0}}));
}

TEST(QSystem, SimplyLacedTopLeftBlockVanishes) {
  for (const auto& t : {"A1", "A4", "D5", "E6"}) {
    const auto cd = build_cartan(t);
    EXPECT_TRUE(exchange_matrix(cd).block(0, 0, cd.r(), cd.r()).is_zero()) << t;
  }
}

TEST(QSystem, SeedLayoutWithCoefficients) {
  const auto cd = build_cartan("B2");
  const auto s = build_seed(cd, Coefficients::Symbolic);
  ASSERT_EQ(s.n(), 4u);
  ASSERT_EQ(s.m(), 2u);
  EXPECT_EQ(s.frozen_rows, IntMatrix::from_rows({{-1, 0, 1, 0}, {0, -1, 0, 1}}));
  EXPECT_EQ(s.frozen_values[1], gen(6, q_index(cd, 1)));
  EXPECT_EQ(s.x[3], gen(6, a_index(cd, 1)));
}

TEST(QSystem, TFactorB3ShortLong) {
  const auto cd = build_cartan("B3");
  for (long m = 0; m < 4; ++m) EXPECT_EQ(t_factor(cd, 2, 1, 2 * m + 1), idx({{1, m}, {1, m + 1}}));
  EXPECT_EQ(t_factor(cd, 2, 1, 4), idx({{1, 2}, {1, 2}}));
}

TEST(QSystem, TFactorSimplyLaced) {
  const auto cd = build_cartan("D4");
  for (long k = -2; k < 5; ++k) EXPECT_EQ(t_factor(cd, 0, 1, k), idx({{1, k}}));
}

TEST(QSystem, TFactorG2) {
  const auto cd = build_cartan("G2");
  for (long m = 0; m < 4; ++m) EXPECT_EQ(t_factor(cd, 1, 0, 3 * m + 2), idx({{0, m}, {0, m + 1}, {0, m + 1}}));
  // Normalized floors.
  EXPECT_EQ(t_factor(cd, 1, 0, 3 * 1 + 1, true), idx({{0, 1}, {0, 1}, {0, 2}}));
}

TEST(QSystem, TFactorNotAdjacent) { EXPECT_THROW(t_factor(build_cartan("A3"), 0, 2, 1), NotAdjacent); }

TEST(QSystem, A1KRCharacters) {
  const auto cd = build_cartan("A1");
  auto kr = make_qstate(cd, Variant::Original, InitialMode::KR);
  const auto a = gen(2, a_index(cd, 0));
  EXPECT_EQ(kr.get(0, 2), a * a - c(2, 1));
  EXPECT_EQ(kr.get(0, 3), a * a * a - c(2, 2) * a);
  // Q_{-1} = 0, so Q_{-2} = -1 still exists but the next step down divides by zero.
  EXPECT_TRUE(kr.get(0, -1).is_zero());
  EXPECT_EQ(kr.get(0, -2), -c(2, 1));
  EXPECT_THROW(kr.get(0, -3), SingularBoundary);
}

TEST(QSystem, A2KRCharacter) {
  const auto cd = build_cartan("A2");
  auto kr = make_qstate(cd, Variant::Original, InitialMode::KR);
  const auto a1 = gen(4, a_index(cd, 0)), a2 = gen(4, a_index(cd, 1));
  EXPECT_EQ(kr.get(0, 2), a1 * a1 - a2);
}

TEST(QSystem, RecursionIdentitiesHold) {
  for (const auto& t : {"A2", "B2", "G2"}) {
    auto st = make_qstate(build_cartan(t), Variant::Original);
    for (std::size_t a = 0; a < st.cartan().r(); ++a)
      for (long k = -1; k <= 4; ++k) EXPECT_TRUE(st.satisfies(a, k)) << t << " " << a << " " << k;
  }
}

TEST(QSystem, Epsilons) {
  EXPECT_EQ(epsilons(build_cartan("A1")), (std::vector<Gaussian>{Gaussian{0, 1}}));
  EXPECT_EQ(epsilons(build_cartan("A2")), (std::vector<Gaussian>{Gaussian(-1), Gaussian(-1)}));
  for (const auto& t : {"A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "D5", "E6", "E7", "E8", "F4", "G2"}) {
    const auto cd = build_cartan(t);
    const auto e = epsilons(cd);
    for (std::size_t a = 0; a < cd.r(); ++a) {
      Gaussian prod(1);
      for (std::size_t b = 0; b < cd.r(); ++b) {
        // eps^{-1} = eps^3 for a fourth root of unity.
        const long power = ((cd.C(a, b) % 4) + 4) % 4;
        for (long i = 0; i < power; ++i) prod *= e[b];
      }
      EXPECT_EQ(prod, Gaussian(-1)) << t << " root " << a + 1;
      EXPECT_EQ(e[a] * e[a] * e[a] * e[a], Gaussian(1));
    }
  }
}

TEST(Walk, A1TwoSteps) {
  const auto cd = build_cartan("A1");
  auto R = make_qstate(cd, Variant::Normalized);
  const auto nodes = walk(cd, build_seed(cd), make_schedule(cd), 2);
  ASSERT_EQ(nodes.size(), 3u);
  EXPECT_EQ(nodes[1].name, "k'");
  EXPECT_EQ(nodes[1].seed.x, (std::vector<P>{R.get(0, 2), R.get(0, 1)}));
  EXPECT_EQ(nodes[2].name, "k+1");
  EXPECT_EQ(nodes[2].seed.x, (std::vector<P>{R.get(0, 2), R.get(0, 3)}));
  // Single normalized step by hand.
  EXPECT_EQ(R.get(0, 2), gen(2, 0, -1) * gen(2, 1, 2) + gen(2, 0, -1));
}

TEST(Walk, G2ThirdNode) {
  const auto cd = build_cartan("G2");
  auto R = make_qstate(cd, Variant::Normalized);
  const auto nodes = walk(cd, build_seed(cd), make_schedule(cd), 6);
  EXPECT_EQ(nodes[3].name, "k(3)");
  EXPECT_EQ(nodes[3].labels, (std::vector<long>{2, 4, 1, 3}));
  EXPECT_EQ(nodes[3].seed.x, (std::vector<P>{R.get(0, 2), R.get(1, 4), R.get(0, 1), R.get(1, 3)}));
  EXPECT_EQ(nodes[6].labels, node_labels(cd, 1));
  EXPECT_EQ(nodes[6].seed.B, exchange_matrix(cd));
}

TEST(Walk, B3FirstNode) {
  const auto cd = build_cartan("B3");
  auto R = make_qstate(cd, Variant::Normalized);
  const auto start = build_seed(cd);
  const auto nodes = walk(cd, start, make_schedule(cd), 5);
  EXPECT_EQ(nodes[1].name, "k(1)");
  EXPECT_EQ(nodes[1].seed.x[2], R.get(2, 2));
  EXPECT_EQ(nodes[1].seed.x[0], start.x[0]);
  EXPECT_EQ(nodes[1].seed.x[1], start.x[1]);
}

TEST(Walk, MatricesReturnAfterOnePeriod) {
  for (const auto& t : {"A2", "A3", "D4", "B2", "B3", "C3", "F4", "G2"}) {
    const auto cd = build_cartan(t);
    const auto sched = make_schedule(cd);
    EXPECT_EQ(sched.expected_B.back(), exchange_matrix(cd)) << t;
    EXPECT_EQ(walk_matrices(cd, exchange_matrix(cd), sched, 3 * sched.period()), 3 * sched.period());
  }
}

TEST(Walk, WrongScheduleIsFatal) {
  const auto a3 = build_cartan("A3");
  EXPECT_THROW(walk_matrices(a3, exchange_matrix(a3), make_schedule(build_cartan("B3")), 5), Error);
  EXPECT_THROW(walk(a3, build_seed(build_cartan("A2")), make_schedule(a3), 2), ScheduleMismatch);
}

TEST(Walk, HalfTranslationIsBlockSwap) {
  for (const auto& t : {"A1", "A3", "D4", "E6"}) {
    const auto cd = build_cartan(t);
    const auto nodes = walk(cd, build_seed(cd), make_schedule(cd), 1);
    EXPECT_EQ(nodes[1].seed.B, swap_halves(exchange_matrix(cd))) << t;
  }
}

TEST(Walk, ExtendedA3Evolutions) {
  const auto cd = build_cartan("A3");
  auto R = make_qstate(cd, Variant::Normalized);
  const auto s = build_seed(cd);
  const V first{1, 2};
  const auto m6 = mutate(compound_mutate(s, std::span<const std::size_t>(first)), 5);
  EXPECT_EQ(m6.x, (std::vector<P>{R.get(0, 0), R.get(1, 2), R.get(2, 2), R.get(0, 1), R.get(1, 1), R.get(2, 3)}));
  const V second{0, 1};
  const auto m4 = mutate(compound_mutate(s, std::span<const std::size_t>(second)), 3);
  EXPECT_EQ(m4.x, (std::vector<P>{R.get(0, 2), R.get(1, 2), R.get(2, 0), R.get(0, 3), R.get(1, 1), R.get(2, 1)}));
}

TEST(Crosscheck, A2CoversAllFourteen) {
  const auto rep = crosscheck(build_cartan("A2"), 6);
  EXPECT_EQ(rep.checked.size(), 14u);
  EXPECT_TRUE(rep.ok());
}

TEST(Crosscheck, G2ScaledRange) {
  const auto rep = crosscheck(build_cartan("G2"), 4);
  EXPECT_EQ(rep.checked.size(), 5u + 13u);
  EXPECT_TRUE(rep.checked.count({1, 12}));
  EXPECT_FALSE(rep.checked.count({0, 5}));
}

TEST(Crosscheck, A1SingleStep) {
  const auto rep = crosscheck(build_cartan("A1"), 2);
  EXPECT_EQ(rep.checked, (std::set<QIndex>{{0, 0}, {0, 1}, {0, 2}}));
}

TEST(Crosscheck, CoefficientsAtMinusOne) {
  for (const auto& t : {"A2", "B2", "G2"}) {
    EXPECT_TRUE(crosscheck_coefficients(build_cartan(t), 4, Coefficients::MinusOne).ok()) << t;
  }
}

TEST(Crosscheck, SymbolicCoefficients) {
  EXPECT_TRUE(crosscheck_coefficients(build_cartan("B2"), 4, Coefficients::Symbolic).ok());
}

TEST(Crosscheck, NormalizationOverGaussians) {
  for (const auto& t : {"A1", "A2", "B2", "G2"}) EXPECT_TRUE(crosscheck_normalization(build_cartan(t), 4).ok()) << t;
}

TEST(Crosscheck, AugmentedMatrixReturnsEachPeriod) {
  for (const auto& t : {"A2", "B3", "G2"}) {
    const auto rep = coefficient_walk_check(build_cartan(t), 3);
    EXPECT_EQ(rep.periods_restored, 3u) << t;
  }
}

TEST(Translation, A1) {
  const auto cd = build_cartan("A1");
  auto st = make_qstate(cd);
  EXPECT_TRUE(translation_invariance_check(st, 2, 1, 0));
  EXPECT_TRUE(translation_invariance_check(st, 2, 2, 0));
  // Right side for k = 1 is Q_{1,1} evaluated at shifted data, i.e. Q_{1,3}.
  std::vector<P> images{st.get(0, 2), st.get(0, 3)};
  EXPECT_EQ(substitute(st.get(0, 1), std::span<const P>(images)), st.get(0, 3));
}

TEST(Translation, A2) {
  auto st = make_qstate(build_cartan("A2"));
  EXPECT_TRUE(translation_invariance_check(st, 2, 2, 0));
  EXPECT_TRUE(translation_invariance_by_recursion(st, 2, 2, 0));
}

TEST(Translation, OddShiftSimplyLaced) {
  auto st = make_qstate(build_cartan("A2"));
  for (long k = 0; k <= 3; ++k)
    for (std::size_t a = 0; a < 2; ++a) EXPECT_TRUE(translation_invariance_check(st, 1, k, a));
}

TEST(Translation, RecursionRouteAgreesWithSubstitution) {
  auto st = make_qstate(build_cartan("B2"));
  for (long k = 0; k <= 3; ++k)
    for (std::size_t a = 0; a < 2; ++a) {
      EXPECT_TRUE(translation_invariance_check(st, 2, k, a));
      EXPECT_TRUE(translation_invariance_by_recursion(st, 2, k, a));
    }
}
