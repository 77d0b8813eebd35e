#include <cmath>

#include <gtest/gtest.h>

#include "lamcoal/error.hpp"
#include "lamcoal/model_spec.hpp"
#include "lamcoal/numerics.hpp"
#include "lamcoal/rates.hpp"

namespace lamcoal {
namespace {

TEST(Classify, Kingman) {
  const Classification c = classify(LambdaMeasure::kingman());
  EXPECT_EQ(c.dust, Tri::no);
  EXPECT_EQ(c.cdi, Tri::yes);
  EXPECT_TRUE(c.analytic);
}

TEST(Classify, BolthausenSznitman) {
  const Classification c = classify(LambdaMeasure::bolthausen_sznitman());
  EXPECT_EQ(c.dust, Tri::no);
  EXPECT_EQ(c.cdi, Tri::no);
  ASSERT_TRUE(c.rv.has_value());
  EXPECT_EQ(c.rv->alpha, 1.0);
  EXPECT_NEAR(c.rv->L(1e3), 1.0, 1e-15);
  EXPECT_NEAR(c.rv->L(1e8), 1.0, 1e-15);
}

TEST(Classify, BetaRegularlyVarying) {
  const Classification c = classify(LambdaMeasure::beta(1.5));
  EXPECT_EQ(c.dust, Tri::no);
  EXPECT_EQ(c.cdi, Tri::yes);
  ASSERT_TRUE(c.rv.has_value());
  EXPECT_EQ(c.rv->alpha, 1.5);
  // tail ~ y^-α L with L = 1/(α B(2-α, α))
  EXPECT_NEAR(c.rv->scale, 1.0 / (1.5 * beta_fn(0.5, 1.5)), 1e-14);
}

TEST(Classify, BetaWithFiniteFirstMomentHasDust) {
  // Beta(a, c) with a > 1 integrates p^-1.
  const Classification c = classify(LambdaMeasure::beta2(1.5, 1.0));
  EXPECT_EQ(c.dust, Tri::yes);
  EXPECT_EQ(c.cdi, Tri::no);
}

TEST(Classify, PointAtomHasDust) {
  const Classification c = classify(parse_model("atom:0.5,1"));
  EXPECT_EQ(c.dust, Tri::yes);
}

TEST(Classify, LogFamilyProfile) {
  // μ(x) ~ x (log x)^(1+chi): comes down from infinity exactly when chi > 0.
  const Classification c = classify(LambdaMeasure::log_family(0.5));
  EXPECT_EQ(c.dust, Tri::no);
  EXPECT_EQ(c.cdi, Tri::yes);
  EXPECT_EQ(classify(LambdaMeasure::log_family(-0.5)).cdi, Tri::no);
  EXPECT_EQ(classify(LambdaMeasure::log_family(0.0)).cdi, Tri::no);
  ASSERT_TRUE(c.rv.has_value());
  EXPECT_EQ(c.rv->alpha, 1.0);
  EXPECT_EQ(c.rv->log_power, 0.5);
  EXPECT_NEAR(c.rv->scale, log_family_constant(0.5), 1e-15);
}

TEST(Classify, MixtureTakesDominantProfile) {
  const Classification c = classify(parse_model("mix:bs+beta:1.5"));
  EXPECT_EQ(c.dust, Tri::no);
  EXPECT_EQ(c.cdi, Tri::yes);
  ASSERT_TRUE(c.rv.has_value());
  EXPECT_EQ(c.rv->alpha, 1.5);
  // An atom away from zero does not change the absence of dust.
  const Classification d = classify(parse_model("mix:bs+atom:0.5,1"));
  EXPECT_EQ(d.dust, Tri::no);
  EXPECT_EQ(d.rv->alpha, 1.0);
}

TEST(Classify, GenericMeasuresNeverClaimCertainty) {
  const LambdaMeasure m(0.0, {}, {DensityPart{[](double) { return 1.0; }, "flat"}}, "flat");
  const Classification c = classify(m);
  EXPECT_FALSE(c.analytic);
  EXPECT_EQ(c.dust, Tri::unknown);
  EXPECT_EQ(c.cdi, Tri::unknown);
  ASSERT_TRUE(c.kappa_slope.has_value());
  ASSERT_TRUE(c.mu_slope.has_value());
  // κ(x) ~ log x for the flat density: slope near zero
  EXPECT_LT(*c.kappa_slope, 0.2);
}

TEST(Classify, HintSettlesGenericCase) {
  const LambdaMeasure m(0.0, {}, {DensityPart{[](double) { return 1.0; }, "flat"}}, "flat");
  RVProfile hint;
  hint.alpha = 1.5;
  hint.L = [](double) { return 1.0; };
  const Classification c = classify(m, hint);
  EXPECT_EQ(c.dust, Tri::no);
  EXPECT_EQ(c.cdi, Tri::yes);
}

TEST(Lstar, ConstantAndLogProfiles) {
  const Classification bs = classify(LambdaMeasure::bolthausen_sznitman());
  EXPECT_NEAR(lstar(*bs.rv, std::exp(1.0)), 1.0, 1e-14);
  EXPECT_NEAR(lstar(*bs.rv, 1e4), std::log(1e4), 1e-12);
  const Classification lf = classify(LambdaMeasure::log_family(0.5));
  const double x = 1e5;
  const double k = log_family_constant(0.5);
  EXPECT_NEAR(lstar(*lf.rv, x) / (k * std::pow(std::log(x), 1.5) / 1.5), 1.0, 1e-12);
}

TEST(Lstar, QuadratureForNonAnalyticProfile) {
  RVProfile p;
  p.alpha = 1.0;
  p.L = [](double y) { return 2.0 + std::sin(std::log(std::log(y + std::exp(1.0)))); };
  const double ref = integrate([&](double y) { return p.L(y) / y; }, 1.0, 50.0);
  EXPECT_NEAR(lstar(p, 50.0) / ref, 1.0, 1e-9);
}

TEST(Lstar, RejectsOtherExponents) {
  const Classification c = classify(LambdaMeasure::beta(1.5));
  EXPECT_THROW(lstar(*c.rv, 10.0), InvalidInput);
}

}  // namespace
}  // namespace lamcoal
