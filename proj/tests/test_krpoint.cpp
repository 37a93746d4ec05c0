#include <gtest/gtest.h>

#include "qcluster/krpoint.hpp"
#include "qcluster/verify.hpp"

using namespace qcluster;

namespace {

using P = LaurentPoly<Integer>;

P gen(std::size_t n, std::size_t i, Exponent e = 1) { return P::variable(n, i, e); }
P c(std::size_t n, long v) { return P::constant(n, Integer(v)); }

}  // namespace

TEST(KRPoint, SpecializeA1) {
  const auto cd = build_cartan("A1");
  auto st = make_qstate(cd);
  const auto a = gen(2, a_index(cd, 0));
  EXPECT_EQ(specialize_kr(st.get(0, 2), cd), a * a - c(2, 1));
  EXPECT_EQ(specialize_kr(P::one(2), cd), P::one(2));
}

TEST(KRPoint, SpecializeMatchesKRRecursion) {
  for (const auto& t : {"A2", "B2", "G2", "A3"}) {
    const auto cd = build_cartan(t);
    auto generic = make_qstate(cd);
    auto kr = make_qstate(cd, Variant::Original, InitialMode::KR);
    for (std::size_t a = 0; a < cd.r(); ++a)
      for (long k = 0; k <= 4; ++k) EXPECT_EQ(specialize_kr(generic.get(a, k), cd), kr.get(a, k)) << t;
  }
  const auto a2 = build_cartan("A2");
  auto kr = make_qstate(a2, Variant::Original, InitialMode::KR);
  const auto a1 = gen(4, a_index(a2, 0)), a2g = gen(4, a_index(a2, 1));
  EXPECT_EQ(kr.get(0, 3), a1 * a1 * a1 - c(4, 2) * a1 * a2g + c(4, 1));
}

TEST(KRPoint, PolynomialityPredicate) {
  const auto cd = build_cartan("A1");
  auto st = make_qstate(cd);
  const std::vector<std::size_t> b{b_index(cd, 0)};
  EXPECT_FALSE(is_polynomial_in(st.get(0, 2), std::span<const std::size_t>(b)));
  EXPECT_TRUE(check_polynomiality(specialize_kr(st.get(0, 5), cd), cd));
}

TEST(KRPoint, NormalizedKRPoint) {
  // R at the KR point: R_{alpha,0} = eps_alpha, so R_{1,2} for A1 is -i (R11^2 + 1).
  const auto cd = build_cartan("A1");
  auto R = make_qstate(cd, Variant::Normalized);
  using G = LaurentPoly<Gaussian>;
  const auto a = G::variable(2, a_index(cd, 0));
  EXPECT_EQ(specialize_kr_normalized(R.get(0, 2), cd), (a * a + G::one(2)).scaled(Gaussian{0, -1}));
}

TEST(KRPoint, PolynomialityAllTypesSmallK) {
  for (const auto& t : {"A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2"}) {
    EXPECT_EQ(kr_polynomiality_check(build_cartan(t), 5), 6 * build_cartan(t).r()) << t;
  }
}

TEST(KRPoint, SpecializationCommutesWithStep) {
  // Specialize (Q0, Q1) then step, against step then specialize, for one step up.
  for (const auto& t : {"A2", "B2", "G2"}) {
    const auto cd = build_cartan(t);
    auto generic = make_qstate(cd);
    std::vector<P> coeff, q0, q1;
    for (std::size_t a = 0; a < cd.r(); ++a) {
      coeff.push_back(c(2 * cd.r(), -1));
      q0.push_back(specialize_kr(generic.get(a, 0), cd));
      q1.push_back(specialize_kr(generic.get(a, 1), cd));
    }
    QState<Integer> specialized(cd, coeff, q0, q1);
    for (std::size_t a = 0; a < cd.r(); ++a)
      EXPECT_EQ(specialized.get(a, 2), specialize_kr(generic.get(a, 2), cd)) << t;
  }
}

TEST(Audit, A1R13) {
  const auto cd = build_cartan("A1");
  auto st = make_qstate(cd, Variant::Normalized);
  // R_{1,3} = ((a^2 + 1)^2 + b^2) / (a b^2): the a^-1 class has coefficient (b^2 + 1) / b^2.
  const auto rep = divisibility_audit(st.get(0, 3), cd, exchange_matrix(cd));
  EXPECT_TRUE(rep.pass());
  ASSERT_EQ(rep.entries.size(), 1u);
  EXPECT_EQ(rep.entries[0].term_exponents, (std::vector<Exponent>{-1}));
  EXPECT_EQ(exchange_binomial(cd, exchange_matrix(cd), 0, 2), gen(2, 0, 2) + c(2, 1));
}

TEST(Audit, A2R14) {
  const auto cd = build_cartan("A2");
  auto st = make_qstate(cd, Variant::Normalized);
  EXPECT_TRUE(divisibility_audit(st.get(0, 4), cd, exchange_matrix(cd)).pass());
}

TEST(Audit, PositiveExponentsAreVacuous) {
  const auto cd = build_cartan("A2");
  const auto p = gen(4, a_index(cd, 0), 3) * gen(4, b_index(cd, 1), -2) + c(4, 5);
  EXPECT_TRUE(divisibility_audit(p, cd, exchange_matrix(cd)).entries.empty());
}

TEST(Audit, DetectsMissingFactor) {
  const auto cd = build_cartan("A1");
  const auto p = gen(2, a_index(cd, 0), -1) * c(2, 3);
  EXPECT_THROW(divisibility_audit(p, cd, exchange_matrix(cd)), DivisibilityFailure);
  EXPECT_FALSE(divisibility_audit(p, cd, exchange_matrix(cd), false).pass());
}

TEST(Audit, WalkVariables) {
  // Labels 0 and 1 sit in the initial seed; the walk produces R_{1,2} .. R_{1,6}.
  const auto rep = walk_divisibility_audit(build_cartan("A1"), 6);
  EXPECT_EQ(rep.variables, 5u);
  EXPECT_GT(rep.entries, 0u);
}

TEST(OffGraph, ExhaustiveRankTwo) {
  for (const auto& t : {"A1", "A2", "B2", "G2"}) {
    const auto s = exhaustive_paths(build_cartan(t), 6, true, 6);
    EXPECT_GT(s.paths, 0u) << t;
    EXPECT_EQ(s.variables_checked, s.mutations) << t;
  }
}

TEST(OffGraph, RankThreeSample) {
  for (const auto& t : {"A3", "B3", "C3"}) {
    const auto s = random_path_sample(build_cartan(t), 200, 6, kDefaultRngSeed, true, 4);
    EXPECT_EQ(s.paths, 200u) << t;
  }
}

TEST(OffGraph, SampleIsDeterministic) {
  const auto cd = build_cartan("B2");
  const auto a = random_path_sample(cd, 30, 6, 7), b = random_path_sample(cd, 30, 6, 7);
  EXPECT_EQ(a.rejected, b.rejected);
  EXPECT_EQ(a.mutations, b.mutations);
}
