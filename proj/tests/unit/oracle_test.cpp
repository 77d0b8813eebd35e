#include <cmath>

#include <gtest/gtest.h>

#include "lamcoal/error.hpp"
#include "lamcoal/model_spec.hpp"
#include "lamcoal/numerics.hpp"
#include "lamcoal/oracle.hpp"
#include "lamcoal/simulate.hpp"

namespace lamcoal {
namespace {

TEST(ExpectationDp, KingmanClosedForms) {
  const RateTable t(LambdaMeasure::kingman(), 200);
  const DpTable dp = expectation_dp(t, 200);
  for (int b = 2; b <= 200; ++b) {
    EXPECT_NEAR(dp.length[b], 2 * harmonic(b - 1), 1e-12) << b;
    EXPECT_NEAR(dp.mergers[b], b - 1, 1e-12) << b;
    EXPECT_NEAR(dp.time[b], 2 * (1 - 1.0 / b), 1e-14) << b;
  }
  EXPECT_EQ(dp.length[1], 0.0);
}

TEST(ExpectationDp, TwoBlocks) {
  // one merger at rate λ(2) = Λ([0,1])
  const RateTable t(parse_model("kingman:2"), 2);
  EXPECT_NEAR(expected_absorption_time_dp(t, 2), 0.5, 1e-15);
  EXPECT_NEAR(expected_total_length_dp(t, 2), 1.0, 1e-15);
  EXPECT_NEAR(expected_merger_count_dp(t, 2), 1.0, 1e-15);
}

TEST(ExpectationDp, BolthausenSznitmanThreeBlocks) {
  // λ(3) = 2, P(k=3) = 1/4; E τ̃ = 1/2 + 3/4 · 1, E τ = 1 + 3/4, E ℓ = 3/2 + 3/4 · 2
  const RateTable t(LambdaMeasure::bolthausen_sznitman(), 3);
  EXPECT_NEAR(expected_absorption_time_dp(t, 3), 1.25, 1e-14);
  EXPECT_NEAR(expected_merger_count_dp(t, 3), 1.75, 1e-14);
  EXPECT_NEAR(expected_total_length_dp(t, 3), 3.0, 1e-14);
}

TEST(ExpectationDp, RejectsSizesBeyondTable) {
  const RateTable t(LambdaMeasure::bolthausen_sznitman(), 10);
  EXPECT_THROW(expectation_dp(t, 11), InvalidInput);
}

TEST(Enumeration, KingmanOrderLengths) {
  // E ℓ̂_{n,a} = 2/a
  for (int n = 2; n <= 8; ++n) {
    const RateTable t(LambdaMeasure::kingman(), n);
    const EnumTable e = exhaustive_expectations(t, n);
    ASSERT_EQ(static_cast<int>(e.order.size()), n - 1);
    for (int a = 1; a < n; ++a) EXPECT_NEAR(e.order[a - 1], 2.0 / a, 1e-12) << n << "," << a;
  }
}

TEST(Enumeration, AgreesWithFirstStepRecursion) {
  for (const char* spec : {"kingman", "bs", "beta:1.5", "logfam:0.5", "mix:kingman:0.5+atom:0.6,1"}) {
    for (int n = 2; n <= 8; ++n) {
      const RateTable t(parse_model(spec), n);
      const EnumTable e = exhaustive_expectations(t, n);
      EXPECT_NEAR(e.total, expected_total_length_dp(t, n), 1e-10 * e.total) << spec << " n=" << n;
      EXPECT_NEAR(e.external + e.internal, e.total, 1e-12 * e.total);
    }
  }
}

TEST(Enumeration, RejectsLargeSamples) {
  const RateTable t(LambdaMeasure::kingman(), 9);
  EXPECT_THROW(exhaustive_expectations(t, 9), InvalidInput);
}

TEST(Enumeration, MonteCarloAgreesAtSmallN) {
  const int n = 6;
  const RateTable t(LambdaMeasure::beta(1.5), n);
  const EnumTable e = exhaustive_expectations(t, n);
  EnsembleOptions opts;
  opts.replicates = 20000;
  opts.seed = 31;
  opts.run.a_max = n - 1;
  const EnsembleStats s = replicate(n, t, opts);
  for (int a = 1; a < n; ++a) {
    const Summary& m = s.at("order_length_" + std::to_string(a));
    EXPECT_LT(std::abs(m.mean - e.order[a - 1]), 4 * m.se) << "a=" << a;
  }
}

}  // namespace
}  // namespace lamcoal
