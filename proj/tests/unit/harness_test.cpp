#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "lamcoal/error.hpp"
#include "lamcoal/harness.hpp"

namespace lamcoal {
namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.conf");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return {};
}

TEST(Config, ParsesAllKeys) {
  const ExperimentConfig c = parse(
      "# comment\n"
      "model = beta:1.5\n"
      "n = 10, 100\n"
      "replicates = 50   # trailing comment\n"
      "seed = 9\n"
      "theta = 2\n"
      "c = 0.25,0.5\n"
      "a_max = 4\n"
      "stats = total, sfs\n"
      "out = result.json\n"
      "format = json\n"
      "threads = 2\n"
      "force = true\n"
      "reproducible = yes\n");
  EXPECT_EQ(c.model, "beta:1.5");
  EXPECT_EQ(c.n_grid, (std::vector<int>{10, 100}));
  EXPECT_EQ(c.replicates, 50);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.theta, 2.0);
  EXPECT_EQ(c.c_list, (std::vector<double>{0.25, 0.5}));
  EXPECT_EQ(c.a_max, 4);
  EXPECT_EQ(c.stats, (std::vector<std::string>{"total", "sfs"}));
  EXPECT_EQ(c.out, "result.json");
  EXPECT_EQ(c.format, "json");
  EXPECT_EQ(c.threads, 2);
  EXPECT_TRUE(c.force);
  EXPECT_TRUE(c.reproducible);
}

TEST(Config, EmptyStatisticsList) {
  EXPECT_NE(error_of("model = bs\nstats =\n").find("no statistics requested"), std::string::npos);
  EXPECT_NE(error_of("model = bs\n").find("no statistics requested"), std::string::npos);
  const std::string late = error_of("stats =\nmodel = bs\nseed = 3\n");
  EXPECT_EQ(late.rfind("test.conf:1:", 0), 0u) << late;
}

TEST(Config, DiagnosticsCarryLineNumbers) {
  EXPECT_EQ(error_of("stats = total\n\nreplicates = many\n").rfind("test.conf:3:", 0), 0u);
  EXPECT_EQ(error_of("stats = total\nbogus = 1\n").rfind("test.conf:2:", 0), 0u);
  EXPECT_EQ(error_of("stats = total\njust text\n").rfind("test.conf:2:", 0), 0u);
  const std::string beta = error_of("model = beta:2.5\nstats = total\n");
  EXPECT_EQ(beta.rfind("test.conf:1:", 0), 0u) << beta;
  EXPECT_NE(beta.find("(1, 2)"), std::string::npos) << beta;
}

TEST(Config, InvariantsAreChecked) {
  EXPECT_NE(error_of("stats = total\nn = 100, 10\n").find("strictly increasing"), std::string::npos);
  EXPECT_NE(error_of("stats = total\nreplicates = 0\n").find("at least 1"), std::string::npos);
  EXPECT_NE(error_of("stats = total\nc = 1.5\n").find("(0, 1)"), std::string::npos);
  EXPECT_NE(error_of("stats = walk\n").find("unknown statistic"), std::string::npos);
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/x.conf"), InvalidInput); }

ExperimentConfig small(const std::string& model, std::vector<std::string> stats) {
  ExperimentConfig c;
  c.model = model;
  c.n_grid = {20, 60};
  c.replicates = 40;
  c.seed = 5;
  c.stats = std::move(stats);
  return c;
}

TEST(Verifier, RowsAreConsistent) {
  Verifier v(small("bs", {"total", "external", "internal", "orders", "mergers", "hitting",
                          "harmonic", "truncated", "sfs"}));
  const auto rows = v.run_all();
  ASSERT_FALSE(rows.empty());
  for (const RatioRow& r : rows) {
    SCOPED_TRACE(r.statistic + " " + r.form);
    if (r.flags.find("undefined") != std::string::npos) continue;
    EXPECT_GT(r.prediction, 0.0);
    EXPECT_DOUBLE_EQ(r.ratio, r.mc_mean / r.prediction);
    EXPECT_LE(r.ci_low, r.ratio);
    EXPECT_GE(r.ci_high, r.ratio);
  }
}

TEST(Verifier, KingmanOrderLawsAreGated) {
  Verifier v(small("kingman", {"orders"}));
  EXPECT_THROW(v.run(Experiment::order_lengths), HypothesisError);
  EXPECT_THROW(v.run(Experiment::internal_length), HypothesisError);
  ExperimentConfig forced = small("kingman", {"orders"});
  forced.force = true;
  Verifier f(forced);
  for (const RatioRow& r : f.run(Experiment::order_lengths)) {
    EXPECT_NE(r.flags.find("forced"), std::string::npos);
  }
}

TEST(Verifier, DustIsRefused) {
  Verifier v(small("atom:0.5,1", {"total"}));
  EXPECT_THROW(v.run(Experiment::total_length), HypothesisError);
}

TEST(Verifier, GenericMeasureFlagsUnverifiedHypotheses) {
  Verifier v(small("table:" LAMCOAL_TEST_DATA_DIR "/uniform_density.csv", {"total"}));
  for (const RatioRow& r : v.run(Experiment::total_length)) {
    EXPECT_NE(r.flags.find("hypothesis-unverified"), std::string::npos);
  }
}

TEST(Verifier, DegenerateGridFlagsUndefinedRows) {
  ExperimentConfig c = small("bs", {"total", "internal", "mergers", "truncated", "sfs"});
  c.n_grid = {2};
  Verifier v(c);
  const auto rows = v.run_all();
  bool undefined = false;
  for (const RatioRow& r : rows) {
    if (r.flags.find("undefined") != std::string::npos) {
      undefined = true;
      EXPECT_TRUE(std::isnan(r.ratio));
    }
  }
  EXPECT_TRUE(undefined);
}

TEST(Verifier, KingmanExternalLengthMatchesExactValue) {
  ExperimentConfig c = small("kingman", {"external"});
  c.n_grid = {100};
  c.replicates = 400;
  Verifier v(c);
  const auto rows = v.run(Experiment::external_length);
  ASSERT_EQ(rows.size(), 1u);
  // E ℓ̂ = 2 exactly
  EXPECT_LT(std::abs(rows[0].mc_mean - 2.0), 4 * rows[0].mc_se);
}

TEST(Verifier, ZeroThetaGivesZeroCounts) {
  ExperimentConfig c = small("bs", {"sfs"});
  c.theta = 0.0;
  Verifier v(c);
  for (const RatioRow& r : v.run(Experiment::sfs)) {
    if (r.statistic.rfind("sfs_dispersion", 0) == 0) continue;
    EXPECT_EQ(r.mc_mean, 0.0) << r.statistic;
  }
}

TEST(Verifier, QuadrupledReplicatesHalveIntervals) {
  ExperimentConfig c = small("beta:1.5", {"total"});
  c.n_grid = {50};
  c.replicates = 400;
  Verifier a(c);
  c.replicates = 1600;
  Verifier b(c);
  const RatioRow ra = a.run(Experiment::total_length).front();
  const RatioRow rb = b.run(Experiment::total_length).front();
  const double shrink = (ra.ci_high - ra.ci_low) / (rb.ci_high - rb.ci_low);
  EXPECT_GE(shrink, 1.7);
  EXPECT_LE(shrink, 2.3);
}

TEST(Experiments, NamesRoundTrip) {
  for (const char* name :
       {"total", "external", "internal", "orders", "mergers", "hitting", "harmonic", "truncated", "sfs"}) {
    EXPECT_EQ(to_string(parse_experiment(name)), name);
  }
}

}  // namespace
}  // namespace lamcoal
