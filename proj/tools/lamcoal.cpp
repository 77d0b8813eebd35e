// lamcoal: rates, predictions, simulation, oracles and verification tables
// for Lambda-coalescents without dust.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lamcoal/emit.hpp"
#include "lamcoal/error.hpp"
#include "lamcoal/harness.hpp"
#include "lamcoal/model_spec.hpp"
#include "lamcoal/oracle.hpp"
#include "lamcoal/predict.hpp"
#include "lamcoal/rate_table.hpp"
#include "lamcoal/rates.hpp"
#include "lamcoal/simulate.hpp"

namespace {

using namespace lamcoal;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Globals {
  std::string model = "bs";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  std::string format = "csv";
  bool reproducible = false;
};

// --out takes either a format name (output to stdout) or a file path.
struct Sink {
  Format format = Format::csv;
  std::string path;
};

Sink resolve_sink(const Globals& g) {
  Sink s;
  s.format = parse_format(g.format);
  if (g.out == "csv" || g.out == "json") {
    s.format = parse_format(g.out);
  } else {
    s.path = g.out;
  }
  return s;
}

OutputMeta meta_for(const Globals& g, std::uint64_t seed) {
  OutputMeta m;
  m.seed = seed;
  if (!g.reproducible) m.timestamp = current_timestamp();
  return m;
}

void write(const Table& t, const Globals& g, std::uint64_t seed) {
  const Sink s = resolve_sink(g);
  emit_to(t, meta_for(g, seed), s.format, s.path);
}

std::string tri(Tri t) { return to_string(t); }

// rates ---------------------------------------------------------------------

struct RatesArgs {
  std::vector<double> x{2, 3, 5, 10, 100, 1000, 10000};
  int pmf_b = 0;
  bool classify = false;
};

void cmd_rates(const Globals& g, const RatesArgs& a) {
  const LambdaMeasure m = parse_model(g.model);
  Table t;
  if (a.classify) {
    const Classification c = classify(m);
    t.columns = {"model", "dust", "cdi", "analytic", "alpha", "log_power", "scale",
                 "kappa_slope", "mu_slope"};
    const bool rv = c.rv.has_value();
    t.add({g.model, tri(c.dust), tri(c.cdi), std::string(c.analytic ? "yes" : "no"),
           rv ? c.rv->alpha : kNaN, rv && c.rv->analytic ? c.rv->log_power : kNaN,
           rv && c.rv->analytic ? c.rv->scale : kNaN, c.kappa_slope.value_or(kNaN),
           c.mu_slope.value_or(kNaN)});
  } else if (a.pmf_b > 0) {
    const std::vector<double> pmf = merger_pmf(m, a.pmf_b);
    t.columns = {"model", "b", "k", "probability"};
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      if (i < 2) continue;
      t.add({g.model, static_cast<std::int64_t>(a.pmf_b), static_cast<std::int64_t>(i), pmf[i]});
    }
  } else {
    t.columns = {"model", "x",   "lambda",      "mu",
                 "kappa", "nu",  "psi",         "kappa_prime"};
    for (double x : a.x) {
      t.add({g.model, x, total_rate(m, x), decrease_rate(m, x), kappa(m, x), nu(m, x), psi(m, x),
             kappa_prime_exact(m, x)});
    }
  }
  write(t, g, 0);
}

// predict -------------------------------------------------------------------

struct PredictArgs {
  std::vector<double> n{100, 1000, 10000, 100000};
  std::vector<std::string> stats{"total", "external", "internal", "order"};
  double theta = 1.0;
  double r = 0.0;
  double c = 0.5;
  int a_max = 3;
};

void cmd_predict(const Globals& g, const PredictArgs& a) {
  const Predictor pred(parse_model(g.model));
  Predictor::Request req;
  for (const auto& s : a.stats) req.stats.push_back(parse_statistic(s));
  req.theta = a.theta;
  if (a.r > 0.0) req.r = a.r;
  req.c = a.c;
  req.a_max = a.a_max;
  Table t;
  t.columns = {"model", "n", "statistic", "form", "value", "a", "parameter", "flags"};
  for (double n : a.n) {
    for (const Prediction& p : pred.evaluate(n, req)) {
      t.add({g.model, p.n, to_string(p.statistic), to_string(p.form), p.value,
             static_cast<std::int64_t>(p.a), p.parameter,
             std::string(p.hypothesis_unverified ? "hypothesis-unverified" : "")});
    }
  }
  write(t, g, 0);
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
  int n = 100;
  long reps = 100;
  double theta = -1.0;
  int a_max = 0;
  std::vector<double> thresholds;
  std::string emit = "summary";
};

void cmd_simulate(const Globals& g, const SimulateArgs& a) {
  if (a.n < 2) throw InvalidInput("--n must be at least 2");
  if (a.emit != "summary" && a.emit != "per-run") {
    throw InvalidInput("--emit must be summary or per-run");
  }
  const LambdaMeasure m = parse_model(g.model);
  const RateTable table(m, a.n);
  EnsembleOptions opts;
  opts.replicates = a.reps;
  opts.seed = g.seed;
  opts.threads = g.threads;
  opts.keep_runs = a.emit == "per-run";
  if (a.theta >= 0.0) opts.theta = a.theta;
  opts.run.a_max = a.a_max;
  for (double c : a.thresholds) {
    if (!(c > 0.0 && c < 1.0)) throw InvalidInput("--thresholds must lie in (0, 1)");
    opts.run.thresholds.push_back(std::clamp(c * a.n, 2.0, static_cast<double>(a.n)));
  }
  const EnsembleStats ens = replicate(a.n, table, opts);
  Table t;
  if (a.emit == "per-run") {
    t.columns = {"replicate", "seed"};
    t.columns.insert(t.columns.end(), ens.names.begin(), ens.names.end());
    for (std::size_t i = 0; i < ens.records.size(); ++i) {
      std::vector<Cell> row{static_cast<std::int64_t>(i), std::to_string(ens.runs[i].seed)};
      for (double v : ens.records[i]) row.emplace_back(v);
      t.add(std::move(row));
    }
  } else {
    t.columns = {"model", "n", "statistic", "mean", "variance", "se", "count"};
    for (std::size_t i = 0; i < ens.names.size(); ++i) {
      const Summary& s = ens.summaries[i];
      t.add({g.model, static_cast<std::int64_t>(a.n), ens.names[i], s.mean, s.variance, s.se,
             static_cast<std::int64_t>(s.count)});
    }
  }
  write(t, g, g.seed);
}

// oracle --------------------------------------------------------------------

struct OracleArgs {
  int n = 10;
  std::string what = "length";
};

void cmd_oracle(const Globals& g, const OracleArgs& a) {
  if (a.n < 2) throw InvalidInput("--n must be at least 2");
  const RateTable table(parse_model(g.model), a.n);
  Table t;
  if (a.what == "enum") {
    const EnumTable e = exhaustive_expectations(table, a.n);
    t.columns = {"model", "n", "statistic", "a", "value"};
    for (std::size_t i = 0; i < e.order.size(); ++i) {
      t.add({g.model, static_cast<std::int64_t>(a.n), std::string("order_length"),
             static_cast<std::int64_t>(i + 1), e.order[i]});
    }
    t.add({g.model, static_cast<std::int64_t>(a.n), std::string("external_length"),
           std::int64_t{1}, e.external});
    t.add({g.model, static_cast<std::int64_t>(a.n), std::string("internal_length"),
           std::int64_t{0}, e.internal});
    t.add({g.model, static_cast<std::int64_t>(a.n), std::string("total_length"), std::int64_t{0},
           e.total});
  } else {
    const DpTable dp = expectation_dp(table, a.n);
    const std::vector<double>* column = nullptr;
    std::string name;
    if (a.what == "length") {
      column = &dp.length;
      name = "total_length";
    } else if (a.what == "mergers") {
      column = &dp.mergers;
      name = "merger_count";
    } else if (a.what == "time") {
      column = &dp.time;
      name = "absorption_time";
    } else {
      throw InvalidInput("--what must be length, mergers, time or enum");
    }
    t.columns = {"model", "b", "statistic", "value"};
    for (int b = 2; b <= a.n; ++b) {
      t.add({g.model, static_cast<std::int64_t>(b), name, (*column)[static_cast<std::size_t>(b)]});
    }
  }
  write(t, g, 0);
}

// verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string config;
  std::vector<std::string> stats;
  std::vector<int> n;
  long reps = 0;
  bool force = false;
};

void cmd_verify(const Globals& g, const VerifyArgs& a, const CLI::App& root) {
  ExperimentConfig cfg;
  if (!a.config.empty()) cfg = load_config(a.config);
  // Command line flags override the file.
  if (root.count("--model") > 0) cfg.model = g.model;
  if (root.count("--seed") > 0) cfg.seed = g.seed;
  if (root.count("--threads") > 0) cfg.threads = g.threads;
  if (root.count("--reproducible") > 0) cfg.reproducible = true;
  if (!a.stats.empty()) cfg.stats = a.stats;
  if (!a.n.empty()) cfg.n_grid = a.n;
  if (a.reps > 0) cfg.replicates = a.reps;
  if (a.force) cfg.force = true;
  cfg.validate();

  Globals out = g;
  out.reproducible = cfg.reproducible;
  out.format = root.count("--format") > 0 ? g.format : cfg.format;
  out.out = root.count("--out") > 0 ? g.out : cfg.out;

  Verifier verifier(cfg);
  write(ratio_table(verifier.run_all()), out, cfg.seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rates, predictions, simulation and verification for Lambda-coalescents"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--model", g.model, "Model spec (see docs/models.md)");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "csv, json, or an output file path (default stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--reproducible", g.reproducible, "Omit the timestamp from the output header");

  RatesArgs ra;
  auto* rates = app.add_subcommand("rates", "Rate functions of a model");
  rates->add_option("--x", ra.x, "Comma separated arguments x >= 2")->delimiter(',');
  rates->add_option("--pmf", ra.pmf_b, "Emit the merger-size distribution for b blocks");
  rates->add_flag("--classify", ra.classify, "Emit the dust/CDI/regular variation classification");

  PredictArgs pa;
  auto* predict = app.add_subcommand("predict", "Asymptotic predictions");
  predict->add_option("--n", pa.n, "Sample sizes")->delimiter(',');
  predict->add_option("--stats", pa.stats, "Statistics")->delimiter(',');
  predict->add_option("--theta", pa.theta, "Mutation rate");
  predict->add_option("--r", pa.r, "Absolute threshold for chain statistics (default c n)");
  predict->add_option("--c", pa.c, "Threshold fraction");
  predict->add_option("--a-max", pa.a_max, "Largest order a");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble");
  simulate->add_option("--n", sa.n, "Sample size")->required();
  simulate->add_option("--reps", sa.reps, "Replicates")->check(CLI::PositiveNumber);
  simulate->add_option("--theta", sa.theta, "Mutation rate; enables SFS columns");
  simulate->add_option("--a-max", sa.a_max, "Largest order with its own length");
  simulate->add_option("--thresholds", sa.thresholds, "Threshold fractions c")->delimiter(',');
  simulate->add_option("--emit", sa.emit, "summary or per-run");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Exact expectations");
  oracle->add_option("--n", oa.n, "Sample size")->required();
  oracle->add_option("--what", oa.what, "length, mergers, time or enum");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Monte Carlo vs prediction ratio tables");
  verify->add_option("--config", va.config, "Config file (see docs/config.md)");
  verify->add_option("--stats", va.stats, "Experiments (overrides the config)")->delimiter(',');
  verify->add_option("--n", va.n, "n grid (overrides the config)")->delimiter(',');
  verify->add_option("--reps", va.reps, "Replicates (overrides the config)");
  verify->add_flag("--force", va.force, "Run experiments whose hypotheses fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (*rates) cmd_rates(g, ra);
    if (*predict) cmd_predict(g, pa);
    if (*simulate) cmd_simulate(g, sa);
    if (*oracle) cmd_oracle(g, oa);
    if (*verify) cmd_verify(g, va, app);
  } catch (const Error& e) {
    std::cerr << "lamcoal: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "lamcoal: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical);
  }
  return 0;
}
