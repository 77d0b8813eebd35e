#include "lamcoal/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lamcoal/error.hpp"
#include "lamcoal/model_spec.hpp"
#include "lamcoal/oracle.hpp"

namespace lamcoal {

namespace {

constexpr double kZ95 = 1.959963984540054;

const std::pair<const char*, Experiment> kExperimentNames[] = {
    {"total", Experiment::total_length},       {"external", Experiment::external_length},
    {"internal", Experiment::internal_length}, {"orders", Experiment::order_lengths},
    {"mergers", Experiment::merger_count},     {"hitting", Experiment::hitting_time},
    {"harmonic", Experiment::harmonic_sum},    {"truncated", Experiment::truncated_lengths},
    {"sfs", Experiment::sfs},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InvalidInput("expected a number, got '" + s + "'");
  }
  if (pos != s.size()) throw InvalidInput("expected a number, got '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s) {
  const double v = parse_double(s);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw InvalidInput("expected an integer, got '" + s + "'");
  }
  return static_cast<long long>(v);
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw InvalidInput("expected true or false, got '" + s + "'");
}

void join_flag(std::string& flags, const std::string& f) {
  if (f.empty() || flags.find(f) != std::string::npos) return;
  flags += flags.empty() ? f : ";" + f;
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [name, value] : kExperimentNames) {
    if (value == e) return name;
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [key, value] : kExperimentNames) {
    if (name == key) return value;
  }
  throw InvalidInput("unknown statistic '" + name +
                     "' (expected total, external, internal, orders, mergers, hitting, "
                     "harmonic, truncated or sfs)");
}

void ExperimentConfig::validate() const {
  if (stats.empty()) throw InvalidInput("no statistics requested");
  for (const auto& s : stats) parse_experiment(s);
  if (n_grid.empty()) throw InvalidInput("n-grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw InvalidInput("n-grid values must be at least 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw InvalidInput("n-grid must be strictly increasing");
    }
  }
  if (replicates < 1) throw InvalidInput("replicate count must be at least 1");
  for (double c : c_list) {
    if (!(c > 0.0 && c < 1.0)) throw InvalidInput("threshold fractions c must lie in (0, 1)");
  }
  if (!(theta >= 0.0)) throw InvalidInput("theta must be nonnegative");
  if (a_max < 1) throw InvalidInput("a_max must be at least 1");
  if (threads < 1) throw InvalidInput("threads must be at least 1");
  parse_format(format);
  parse_model(model);
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  int stats_line = 0;
  int model_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) -> InvalidInput {
      return InvalidInput(source + ":" + std::to_string(lineno) + ": " + msg);
    };
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "model") {
        cfg.model = value;
        model_line = lineno;
        parse_model(value);
      } else if (key == "n") {
        cfg.n_grid.clear();
        for (const auto& v : split_list(value)) {
          cfg.n_grid.push_back(static_cast<int>(parse_integer(v)));
        }
      } else if (key == "replicates") {
        cfg.replicates = static_cast<long>(parse_integer(value));
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_integer(value));
      } else if (key == "theta") {
        cfg.theta = parse_double(value);
      } else if (key == "c") {
        cfg.c_list.clear();
        for (const auto& v : split_list(value)) cfg.c_list.push_back(parse_double(v));
      } else if (key == "a_max") {
        cfg.a_max = static_cast<int>(parse_integer(value));
      } else if (key == "stats") {
        cfg.stats = split_list(value);
        stats_line = lineno;
        for (const auto& s : cfg.stats) parse_experiment(s);
      } else if (key == "out") {
        cfg.out = value;
      } else if (key == "format") {
        cfg.format = value;
        parse_format(value);
      } else if (key == "threads") {
        cfg.threads = static_cast<int>(parse_integer(value));
      } else if (key == "force") {
        cfg.force = parse_bool(value);
      } else if (key == "reproducible") {
        cfg.reproducible = parse_bool(value);
      } else {
        throw InvalidInput("unknown key '" + key + "'");
      }
    } catch (const InvalidInput& e) {
      throw fail(e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    const int at = msg == "no statistics requested" ? stats_line : model_line;
    throw InvalidInput(source + ":" + std::to_string(at > 0 ? at : lineno) + ": " + msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

Verifier::Verifier(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  const LambdaMeasure measure = parse_model(config_.model);
  predictor_ = std::make_unique<Predictor>(measure);
  const int bmax = std::max(2, *std::max_element(config_.n_grid.begin(), config_.n_grid.end()));
  table_ = std::make_unique<RateTable>(measure, bmax);
}

std::uint64_t Verifier::seed_for(int n) const {
  return stream_seed(config_.seed, static_cast<std::uint64_t>(n));
}

const EnsembleStats& Verifier::ensemble(int n) {
  auto it = ensembles_.find(n);
  if (it != ensembles_.end()) return it->second;
  EnsembleOptions opts;
  opts.replicates = config_.replicates;
  opts.seed = seed_for(n);
  opts.threads = config_.threads;
  opts.keep_runs = true;
  opts.theta = config_.theta;
  opts.run.a_max = std::max(config_.a_max, 3);
  for (double c : config_.c_list) {
    opts.run.thresholds.push_back(std::clamp(c * n, 2.0, static_cast<double>(n)));
  }
  return ensembles_.emplace(n, replicate(n, *table_, opts)).first->second;
}

std::string Verifier::gate(Experiment e) const {
  const Classification& cls = predictor_->classification();
  std::string flags;
  if (cls.dust == Tri::yes) {
    if (!config_.force) {
      throw HypothesisError(to_string(e) + ": the limit laws require a coalescent without dust; '" +
                            config_.model + "' has a dust component (use --force to run anyway)");
    }
    join_flag(flags, "forced");
  } else if (cls.dust == Tri::unknown) {
    join_flag(flags, "hypothesis-unverified");
  }
  const bool needs_alpha_one = e == Experiment::internal_length || e == Experiment::order_lengths;
  if (needs_alpha_one && !predictor_->has_alpha_one()) {
    if (!config_.force) {
      throw HypothesisError(to_string(e) +
                            ": this law requires regular variation with exponent alpha = 1; '" +
                            config_.model + "' does not satisfy it (use --force to run anyway)");
    }
    join_flag(flags, "forced");
  }
  return flags;
}

namespace {

RatioRow make_row(const std::string& model, const std::string& stat, const std::string& form,
                  int n, double param, long reps, double mean, double se, double prediction,
                  const std::string& flags) {
  RatioRow r;
  r.model = model;
  r.statistic = stat;
  r.form = form;
  r.n = n;
  r.parameter = param;
  r.replicates = reps;
  r.mc_mean = mean;
  r.mc_se = se;
  r.prediction = prediction;
  r.flags = flags;
  if (prediction > 0.0 && std::isfinite(prediction)) {
    r.ratio = mean / prediction;
    const double half = kZ95 * se / prediction;
    r.ci_low = r.ratio - half;
    r.ci_high = r.ratio + half;
  } else {
    r.ratio = r.ci_low = r.ci_high = std::nan("");
    join_flag(r.flags, "undefined");
  }
  return r;
}

std::size_t column(const EnsembleStats& e, const std::string& name) {
  const auto it = std::find(e.names.begin(), e.names.end(), name);
  if (it == e.names.end()) throw InvalidInput("ensemble has no column '" + name + "'");
  return static_cast<std::size_t>(it - e.names.begin());
}

// mean(A)/mean(B) with a delta-method standard error.
std::pair<double, double> ratio_of_means(const EnsembleStats& e, const std::string& a,
                                         const std::string& b) {
  const std::size_t ia = column(e, a);
  const std::size_t ib = column(e, b);
  const auto R = static_cast<double>(e.records.size());
  CompensatedSum sa;
  CompensatedSum sb;
  for (const auto& rec : e.records) {
    sa += rec[ia];
    sb += rec[ib];
  }
  const double ma = sa.value() / R;
  const double mb = sb.value() / R;
  CompensatedSum vaa;
  CompensatedSum vbb;
  CompensatedSum vab;
  for (const auto& rec : e.records) {
    vaa += (rec[ia] - ma) * (rec[ia] - ma);
    vbb += (rec[ib] - mb) * (rec[ib] - mb);
    vab += (rec[ia] - ma) * (rec[ib] - mb);
  }
  const double d = R > 1 ? R - 1 : 1;
  const double q = ma / mb;
  const double var = (vaa.value() / d - 2 * q * vab.value() / d + q * q * vbb.value() / d) /
                     (mb * mb * R);
  return {q, std::sqrt(std::max(var, 0.0))};
}

// Mean over runs of A/B (runs with B = 0 skipped).
std::pair<double, double> mean_of_ratios(const EnsembleStats& e, const std::string& a,
                                         const std::string& b) {
  const std::size_t ia = column(e, a);
  const std::size_t ib = column(e, b);
  std::vector<double> v;
  for (const auto& rec : e.records) {
    if (rec[ib] > 0.0) v.push_back(rec[ia] / rec[ib]);
  }
  if (v.empty()) return {std::nan(""), std::nan("")};
  CompensatedSum s;
  for (double x : v) s += x;
  const double m = s.value() / static_cast<double>(v.size());
  CompensatedSum q;
  for (double x : v) q += (x - m) * (x - m);
  const double var = v.size() > 1 ? q.value() / static_cast<double>(v.size() - 1) : 0.0;
  return {m, std::sqrt(var / static_cast<double>(v.size()))};
}

}  // namespace

std::vector<RatioRow> Verifier::run(Experiment e) {
  const std::string flags = gate(e);
  const Predictor& pred = *predictor_;
  const std::string& model = config_.model;
  const long R = config_.replicates;
  const bool rv1 = pred.has_alpha_one();
  std::vector<RatioRow> rows;

  for (int n : config_.n_grid) {
    const EnsembleStats& ens = ensemble(n);
    auto mean_row = [&](const std::string& stat, const std::string& form, double param,
                        const std::string& col, double prediction) {
      const Summary& s = ens.at(col);
      rows.push_back(make_row(model, stat, form, n, param, R, s.mean, s.se, prediction, flags));
    };
    auto target_row = [&](const std::string& stat, double param, std::pair<double, double> mse,
                          double target) {
      rows.push_back(
          make_row(model, stat, "target", n, param, R, mse.first, mse.second, target, flags));
    };
    const int a_max = std::min(std::max(config_.a_max, 3), n - 1);

    switch (e) {
      case Experiment::total_length: {
        mean_row("total_length", "integral_form", 0, "total_length", pred.total_length(n));
        // Exact expectation where the first-step recursion is cheap.
        if (table_->kind() == RateTable::Kind::kingman || n <= 2000) {
          mean_row("total_length", "oracle", 0, "total_length",
                   expected_total_length_dp(*table_, n));
        }
        break;
      }
      case Experiment::external_length:
        mean_row("external_length", "integral_form", 0, "external_length",
                 pred.external_length(n));
        break;
      case Experiment::internal_length:
        mean_row("internal_length", "integral_form", 0, "internal_length",
                 pred.internal_length_integral(n));
        if (rv1) {
          mean_row("internal_length", "slowly_varying_form", 0, "internal_length",
                   pred.internal_length_slowly_varying(n));
        }
        break;
      case Experiment::order_lengths: {
        mean_row("order_length", "integral_form", 1, "order_length_1", pred.external_length(n));
        if (rv1) {
          for (int a = 1; a <= a_max; ++a) {
            mean_row("order_length", "slowly_varying_form", a, "order_length_" + std::to_string(a),
                     pred.order_length(n, a));
          }
        }
        if (n >= 4) {
          target_row("order2_over_order3", 0, ratio_of_means(ens, "order_length_2", "order_length_3"),
                     3.0);
          target_row("order2_over_internal", 0,
                     mean_of_ratios(ens, "order_length_2", "internal_length"), 0.5);
        }
        break;
      }
      case Experiment::merger_count:
      case Experiment::hitting_time:
      case Experiment::harmonic_sum:
      case Experiment::truncated_lengths: {
        if (e == Experiment::merger_count) {
          mean_row("merger_count_total", "integral_form", 0, "merger_count",
                   n > 2 ? pred.merger_count(n, 2.0) : 0.0);
        }
        for (double c : config_.c_list) {
          const double r = std::clamp(c * n, 2.0, static_cast<double>(n));
          const std::string key = threshold_key(r);
          if (e == Experiment::merger_count) {
            mean_row("merger_count", "integral_form", c, "rho@" + key, pred.merger_count(n, r));
          } else if (e == Experiment::hitting_time) {
            mean_row("hitting_time", "integral_form", c, "rho_time@" + key,
                     pred.hitting_time(n, r));
          } else if (e == Experiment::harmonic_sum) {
            mean_row("harmonic_sum", "integral_form", c, "harmonic_sum@" + key,
                     pred.harmonic_sum(n, r));
          } else {
            const auto [tot, ext] = pred.truncated(n, c);
            mean_row("truncated_total", "integral_form", c, "truncated_total@" + key, tot);
            mean_row("truncated_external", "integral_form", c, "truncated_external@" + key, ext);
          }
        }
        break;
      }
      case Experiment::sfs: {
        const double theta = config_.theta;
        mean_row("sfs_count_1", "integral_form", theta, "sfs_1", theta * pred.external_length(n));
        if (rv1) {
          for (int a = 1; a <= a_max; ++a) {
            mean_row("sfs_count_" + std::to_string(a), "slowly_varying_form", theta,
                     "sfs_" + std::to_string(a), theta * pred.order_length(n, a));
          }
        }
        mean_row("segregating_sites", "integral_form", theta, "segregating_sites",
                 theta * pred.total_length(n));
        if (n >= 4 && theta > 0.0) {
          target_row("sfs2_over_sfs3", theta, ratio_of_means(ens, "sfs_2", "sfs_3"), 3.0);
        }
        // Conditional dispersion: many mutation draws on the first run's branch lengths.
        const int draws = 10000;
        for (int a = 1; a <= std::min(a_max, 3); ++a) {
          Rng rng(stream_seed(seed_for(n), static_cast<std::uint64_t>(R + a)));
          const double mean = theta * ens.runs.front().order[static_cast<std::size_t>(a - 1)];
          CompensatedSum s;
          std::vector<double> v(draws);
          for (auto& x : v) {
            x = static_cast<double>(rng.poisson(mean));
            s += x;
          }
          const double m = s.value() / draws;
          CompensatedSum q;
          for (double x : v) q += (x - m) * (x - m);
          const double index = m > 0.0 ? (q.value() / (draws - 1)) / m : 0.0;
          rows.push_back(make_row(model, "sfs_dispersion_" + std::to_string(a), "target", n,
                                  theta, draws, index, std::sqrt(2.0 / (draws - 1)),
                                  mean > 0.0 ? 1.0 : 0.0, flags));
        }
        break;
      }
    }
  }
  return rows;
}

std::vector<RatioRow> Verifier::run_all() {
  std::vector<RatioRow> all;
  for (const auto& s : config_.stats) {
    auto rows = run(parse_experiment(s));
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

Table ratio_table(const std::vector<RatioRow>& rows) {
  Table t;
  t.columns = {"model",      "statistic", "form",    "n",       "parameter",
               "replicates", "mc_mean",   "mc_se",   "prediction", "ratio",
               "ci_low",     "ci_high",   "flags"};
  for (const auto& r : rows) {
    t.add({r.model, r.statistic, r.form, r.n, r.parameter, static_cast<std::int64_t>(r.replicates),
           r.mc_mean, r.mc_se, r.prediction, r.ratio, r.ci_low, r.ci_high, r.flags});
  }
  return t;
}

}  // namespace lamcoal
