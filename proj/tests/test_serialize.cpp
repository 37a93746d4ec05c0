#include <gtest/gtest.h>

#include "qcluster/qsystem.hpp"
#include "qcluster/serialize.hpp"
#include "qcluster/tsystem.hpp"

using namespace qcluster;

namespace {

using P = LaurentPoly<Integer>;
using G = LaurentPoly<Gaussian>;

}  // namespace

TEST(Json, CartanFormat) {
  EXPECT_EQ(to_json(build_cartan("G2")).dump(), R"({"type":"G","rank":2,"C":[[2,-1],[-3,2]],"t":[1,3]})");
  const auto cd = cartan_from_json(Json::parse(R"({"type":"B","rank":3})"));
  EXPECT_EQ(cd.C, build_cartan("B3").C);
  EXPECT_THROW(cartan_from_json(Json::parse(R"({"type":"G","rank":2,"C":[[2,-3],[-1,2]]})")), ParseError);
  EXPECT_THROW(cartan_from_json(Json::parse(R"({"rank":2})")), ParseError);
}

TEST(Json, PolynomialFormat) {
  const auto p = P::variable(2, 0, 2) - P::one(2);
  EXPECT_EQ(to_json(p).dump(), R"({"nvars":2,"ring":"Z","terms":[{"e":[2,0],"c":1},{"e":[0,0],"c":-1}]})");
  const auto g = G::variable(1, 0).scaled(Gaussian{0, -1});
  EXPECT_EQ(to_json(g).dump(), R"({"nvars":1,"ring":"ZI","terms":[{"e":[1],"c":[0,-1]}]})");
}

TEST(Json, BigCoefficientsSurvive) {
  const Integer big("123456789012345678901234567890");
  const auto p = P::constant(1, big);
  EXPECT_EQ(laurent_from_json<Integer>(to_json(p)), p);
}

TEST(Json, RingMismatch) {
  const auto doc = to_json(P::variable(2, 1));
  EXPECT_THROW(laurent_from_json<Gaussian>(doc), RingMismatch);
}

TEST(Json, MalformedPolynomial) {
  EXPECT_THROW(laurent_from_json<Integer>(Json::parse(R"({"nvars":2,"ring":"Z","terms":[{"e":[1],"c":1}]})")),
               ArityMismatch);
  EXPECT_THROW(laurent_from_json<Integer>(Json::parse(R"({"ring":"Z"})")), ParseError);
}

TEST(Json, NonCanonicalInputIsCanonicalized) {
  const auto doc = Json::parse(R"({"nvars":1,"ring":"Z","terms":[{"e":[0],"c":2},{"e":[1],"c":1},{"e":[0],"c":-2}]})");
  EXPECT_EQ(to_json(laurent_from_json<Integer>(doc)).dump(), R"({"nvars":1,"ring":"Z","terms":[{"e":[1],"c":1}]})");
}

TEST(Json, SeedRoundTrip) {
  for (const auto coeffs : {Coefficients::None, Coefficients::Symbolic, Coefficients::MinusOne}) {
    auto s = build_seed(build_cartan("B2"), coeffs);
    s = mutate(mutate(s, 1), 2);
    const auto text = to_json(s).dump();
    const auto back = seed_from_json<Integer>(Json::parse(text));
    EXPECT_TRUE(seed_equal(back, s));
    EXPECT_EQ(to_json(back).dump(), text);
  }
}

TEST(Json, GaussianSeedRoundTrip) {
  const auto s = build_normalized_seed(build_cartan("A2"));
  const auto text = to_json(s).dump();
  EXPECT_EQ(to_json(seed_from_json<Gaussian>(Json::parse(text))).dump(), text);
}

TEST(Json, SeedValidation) {
  auto doc = to_json(build_seed(build_cartan("A1")));
  doc["B"] = {{0, 2}, {2, 0}};
  EXPECT_THROW(seed_from_json<Integer>(doc), Mismatch);
  doc["B"] = {{0}};
  EXPECT_THROW(seed_from_json<Integer>(doc), ArityMismatch);
}

TEST(Json, TSystemSpec) {
  const auto s = quiver_tsystem(IntMatrix::from_rows({{0, 1}, {-1, 0}}), -3, 3);
  EXPECT_EQ(to_json(s).dump(), R"({"kind":"quiver","gamma":[[0,1],[-1,0]],"window":[-3,3],"q":[-1,-1],"boundary":"unit"})");
  const auto lie = lie_tsystem(build_cartan("A2"), -2, 2, {-1}, Boundary::Strict);
  const auto text = to_json(lie).dump();
  const auto back = tsystem_from_json(Json::parse(text));
  EXPECT_EQ(back.A, lie.A);
  EXPECT_EQ(back.boundary, Boundary::Strict);
  EXPECT_EQ(to_json(back).dump(), text);
}

TEST(Json, TSystemSpecErrors) {
  EXPECT_THROW(tsystem_from_json(Json::parse(R"({"kind":"other","window":[0,2]})")), ParseError);
  EXPECT_THROW(tsystem_from_json(Json::parse(R"({"kind":"quiver","gamma":[[0]],"window":[0]})")), ParseError);
  EXPECT_THROW(tsystem_from_json(Json::parse(R"({"kind":"quiver","gamma":[[0]],"window":[2,0]})")), InvalidWindow);
  EXPECT_THROW(
      tsystem_from_json(Json::parse(R"({"kind":"quiver","gamma":[[0]],"window":[0,2],"boundary":"open"})")),
      ParseError);
}
