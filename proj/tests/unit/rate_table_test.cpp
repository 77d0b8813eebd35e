#include <cmath>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "lamcoal/error.hpp"
#include "lamcoal/model_spec.hpp"
#include "lamcoal/rate_table.hpp"
#include "lamcoal/rates.hpp"

namespace lamcoal {
namespace {

TEST(RateTable, KingmanRows) {
  const RateTable t = build_rate_table(LambdaMeasure::kingman(), 10);
  EXPECT_EQ(t.kind(), RateTable::Kind::kingman);
  for (int b = 2; b <= 10; ++b) {
    EXPECT_EQ(t.lambda(b), b * (b - 1) / 2.0);
    EXPECT_EQ(t.mu(b), b * (b - 1) / 2.0);
    EXPECT_EQ(t.pmf(b, 2), 1.0);
  }
}

TEST(RateTable, BolthausenSznitmanRows) {
  const RateTable t = build_rate_table(LambdaMeasure::bolthausen_sznitman(), 10);
  for (int b = 2; b <= 10; ++b) EXPECT_NEAR(t.lambda(b), b - 1, 1e-13);
  // pmf b/((b-1) k (k-1))
  EXPECT_NEAR(t.pmf(10, 4), 10.0 / (9 * 4 * 3), 1e-15);
}

TEST(RateTable, SingleRow) {
  const RateTable t = build_rate_table(LambdaMeasure::beta(1.5), 2);
  EXPECT_NEAR(t.lambda(2), 1.0, 1e-14);
  EXPECT_NEAR(t.mu(2), 1.0, 1e-14);
  EXPECT_THROW(t.lambda(3), InvalidInput);
  EXPECT_THROW(build_rate_table(LambdaMeasure::beta(1.5), 1), InvalidInput);
}

TEST(RateTable, PmfMatchesDirectRates) {
  for (const char* spec : {"bs", "beta:1.5", "logfam:0.5", "mix:kingman:0.2+beta2:0.7,1.4"}) {
    const LambdaMeasure m = parse_model(spec);
    const RateTable t(m, 80);
    for (int b : {2, 17, 80}) {
      const std::vector<double> direct = merger_pmf(m, b);
      for (int k = 2; k <= b; ++k) {
        EXPECT_NEAR(t.pmf(b, k), direct[static_cast<std::size_t>(k)], 1e-11)
            << spec << " b=" << b << " k=" << k;
      }
    }
  }
}

TEST(RateTable, InverseTransformMatchesCumulativePmf) {
  testing::for_all(41, 6, [](testing::Gen& g, int) {
    const std::string spec = g.model_without_dust();
    SCOPED_TRACE(spec);
    const RateTable t(parse_model(spec), 300);
    const int b = g.integer(2, 300);
    double cum = 0.0;
    for (int k = 2; k <= b; ++k) {
      const double p = t.pmf(b, k);
      if (p > 1e-9) {
        // u just inside the k-th cell maps to k
        EXPECT_EQ(t.sample_merger_size(b, cum + 0.5 * p), k) << "b=" << b;
      }
      cum += p;
    }
    EXPECT_NEAR(cum, 1.0, 1e-10);
  });
}

TEST(RateTable, BuildTimeDualRouteCheckRuns) {
  RateTable::Options opts;
  opts.verify = true;
  EXPECT_NO_THROW(RateTable(LambdaMeasure::log_family(-0.5), 200, opts));
}

TEST(RateTable, ConcurrentReadersSeeSameRows) {
  const LambdaMeasure m(0.0, {}, {DensityPart{[](double p) { return 2 * (1 - p); }, "tri"}}, "tri");
  const RateTable t(m, 150);
  std::vector<std::vector<int>> seen(4);
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (int b = 2; b <= 150; ++b) seen[static_cast<std::size_t>(w)].push_back(t.sample_merger_size(b, 0.999));
    });
  }
  for (auto& th : workers) th.join();
  for (int w = 1; w < 4; ++w) EXPECT_EQ(seen[0], seen[static_cast<std::size_t>(w)]);
}

}  // namespace
}  // namespace lamcoal
