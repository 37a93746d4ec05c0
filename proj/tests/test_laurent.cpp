#include <gtest/gtest.h>

#include <map>
#include <random>

#include "qcluster/laurent.hpp"
#include "qcluster/serialize.hpp"

using namespace qcluster;

namespace {

using P = LaurentPoly<Integer>;
using G = LaurentPoly<Gaussian>;

P x(std::size_t n, std::size_t i, Exponent e = 1) { return P::variable(n, i, e); }
P c(std::size_t n, long v) { return P::constant(n, Integer(v)); }

// Random Laurent polynomial: up to `terms` terms, exponents in [-2, 3], coefficients in [-5, 5].
P random_poly(std::mt19937_64& rng, std::size_t n, std::size_t terms) {
  std::uniform_int_distribution<int> exp(-2, 3), coef(-5, 5), count(1, static_cast<int>(terms));
  std::vector<P::Term> out;
  for (int t = count(rng); t > 0; --t) {
    std::vector<Exponent> e(n);
    for (auto& v : e) v = exp(rng);
    out.emplace_back(Monomial(e), Integer(coef(rng)));
  }
  return P::from_terms(n, std::move(out));
}

}  // namespace

TEST(Laurent, AdditiveInverse) {
  EXPECT_TRUE((x(2, 0) + (-x(2, 0))).is_zero());
  EXPECT_EQ(x(2, 0) - x(2, 0), P::zero(2));
}

TEST(Laurent, MonomialUnit) { EXPECT_EQ(x(2, 0, -1) * x(2, 0), P::one(2)); }

TEST(Laurent, DifferenceOfSquaresExpansion) {
  const auto lhs = (x(2, 0) + x(2, 1)) * (x(2, 0) - x(2, 1));
  const auto rhs = P::from_terms(2, {{Monomial{2, 0}, Integer(1)}, {Monomial{0, 2}, Integer(-1)}});
  EXPECT_EQ(lhs, rhs);
}

TEST(Laurent, CanonicalFormDropsZeros) {
  const auto p = P::from_terms(1, {{Monomial{1}, Integer(2)}, {Monomial{1}, Integer(-2)}, {Monomial{0}, Integer(3)}});
  EXPECT_EQ(p, c(1, 3));
  for (const auto& [m, v] : (x(2, 0) + x(2, 1) - x(2, 1)).terms()) EXPECT_NE(v, 0);
}

TEST(Laurent, ArityMismatch) { EXPECT_THROW(x(2, 0) + x(3, 0), ArityMismatch); }

TEST(Laurent, PowerAndNegativePower) {
  EXPECT_EQ(pow(x(1, 0) + c(1, 1), 3), x(1, 0, 3) + c(1, 3) * x(1, 0, 2) + c(1, 3) * x(1, 0) + c(1, 1));
  EXPECT_EQ(pow(x(1, 0, 2), 0), P::one(1));
}

TEST(Laurent, ExactDivDifferenceOfSquares) {
  EXPECT_EQ(exact_div(x(1, 0, 2) - c(1, 1), x(1, 0) - c(1, 1)), x(1, 0) + c(1, 1));
}

TEST(Laurent, ExactDivByMonomial) {
  const auto q = exact_div(x(2, 1, 2) + c(2, 1), x(2, 0));
  EXPECT_EQ(q, x(2, 0, -1) * x(2, 1, 2) + x(2, 0, -1));
}

TEST(Laurent, ExactDivIntroducesNegativeExponent) {
  const auto q = exact_div(x(2, 0, 2) + x(2, 1), x(2, 1));
  EXPECT_EQ(q, x(2, 1, -1) * x(2, 0, 2) + c(2, 1));
  EXPECT_EQ(q * x(2, 1), x(2, 0, 2) + x(2, 1));
  EXPECT_FALSE(is_polynomial(q));
}

TEST(Laurent, ExactDivRejectsRemainder) {
  EXPECT_THROW(exact_div(x(1, 0, 2) + c(1, 1), x(1, 0) + c(1, 1)), NotDivisible);
  EXPECT_FALSE(try_exact_div(x(1, 0) + c(1, 2), c(1, 3)).has_value());
}

TEST(Laurent, SubstituteToZero) {
  std::map<std::size_t, P> a{{0, c(1, 1)}};
  EXPECT_TRUE(substitute(x(1, 0, 2) - c(1, 1), a).is_zero());
}

TEST(Laurent, SubstituteGaussianUnit) {
  const G p = G::variable(2, 0, -1) * G::variable(2, 1, 2);
  std::map<std::size_t, G> a{{0, G::constant(2, Gaussian{0, 1})}};
  EXPECT_EQ(substitute(p, a), G::variable(2, 1, 2).scaled(Gaussian{0, -1}));
}

TEST(Laurent, SubstituteSl2Character) {
  // x^2 - 1 at x = y + 1/y is the character of the 3-dimensional sl2 module.
  const auto y = x(1, 0);
  std::vector<P> images{y + x(1, 0, -1)};
  const auto got = substitute(x(1, 0, 2) - c(1, 1), std::span<const P>(images));
  EXPECT_EQ(got, x(1, 0, 2) + c(1, 1) + x(1, 0, -2));
}

TEST(Laurent, SubstituteNonUnitUnderNegativePower) {
  std::map<std::size_t, P> a{{0, x(2, 1) + c(2, 1)}};
  EXPECT_THROW(substitute(x(2, 0, -1), a), NonInvertibleSubstitution);
}

TEST(Laurent, PolynomialPredicates) {
  const std::vector<std::size_t> v0{0};
  EXPECT_TRUE(is_polynomial_in(x(2, 0, 2) - c(2, 1), std::span<const std::size_t>(v0)));
  EXPECT_FALSE(is_polynomial_in(x(2, 0, -1) * (x(2, 1, 2) + c(2, 1)), std::span<const std::size_t>(v0)));
  const auto lo = min_exponents(x(2, 0, -1) * x(2, 1, 3) + x(2, 0, 2));
  EXPECT_EQ(lo, (std::vector<Exponent>{-1, 0}));
}

TEST(Laurent, GrlexOrder) {
  const auto p = x(2, 1) + x(2, 0, 2) + c(2, 1) + x(2, 0);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(p.leading().first, (Monomial{2, 0}));
  EXPECT_EQ(p.terms()[1].first, (Monomial{1, 0}));
  EXPECT_EQ(p.terms()[2].first, (Monomial{0, 1}));
  EXPECT_EQ(p.trailing().first, (Monomial{0, 0}));
}

TEST(Laurent, ExponentOverflowIsAnError) {
  const auto big = x(1, 0, std::numeric_limits<Exponent>::max());
  EXPECT_THROW(big * x(1, 0), ExponentOverflow);
}

TEST(Laurent, GaussianArithmetic) {
  const G i = G::constant(1, Gaussian{0, 1});
  EXPECT_EQ(i * i, G::constant(1, Gaussian(-1)));
  const G p = G::variable(1, 0) + i;
  EXPECT_EQ(exact_div(p * p, p), p);
}

TEST(LaurentProperty, RingLaws) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_poly(rng, 3, 5), q = random_poly(rng, 3, 5), s = random_poly(rng, 3, 5);
    ASSERT_EQ(p + q, q + p);
    ASSERT_EQ(p * q, q * p);
    ASSERT_EQ((p + q) + s, p + (q + s));
    ASSERT_EQ((p * q) * s, p * (q * s));
    ASSERT_EQ(p * (q + s), p * q + p * s);
  }
}

TEST(LaurentProperty, DivisionRoundTrip) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_poly(rng, 3, 6), q = random_poly(rng, 3, 4);
    if (q.is_zero()) continue;
    ASSERT_EQ(exact_div(p * q, q), p);
  }
}

TEST(LaurentProperty, LargeProductsUseSameCanonicalForm) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_poly(rng, 4, 40), q = random_poly(rng, 4, 40);
    P naive = P::zero(4);
    for (const auto& t : q.terms()) naive += p.shifted(t.first, t.second);
    ASSERT_EQ(p * q, naive);
  }
}

TEST(LaurentProperty, JsonRoundTripIsByteStable) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_poly(rng, 3, 6);
    const auto text = to_json(p).dump();
    const auto back = laurent_from_json<Integer>(Json::parse(text));
    ASSERT_EQ(back, p);
    ASSERT_EQ(to_json(back).dump(), text);
  }
}
