#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lamcoal/emit.hpp"
#include "lamcoal/predict.hpp"
#include "lamcoal/rate_table.hpp"
#include "lamcoal/simulate.hpp"

namespace lamcoal {

/// Verification experiments, one per limit law.
enum class Experiment {
  total_length,       // ℓ_n against ∫_2^n x/μ(x) dx
  external_length,    // ℓ̂_n against n^2/μ(n)
  internal_length,    // ℓ̌_n, integral and slowly varying forms (exponent 1)
  order_lengths,      // ℓ̂_{n,a} and the order-2/order-3 and order-2/internal ratios
  merger_count,       // mergers before the block count drops to cn
  hitting_time,       // time until the block count drops to cn
  harmonic_sum,       // Σ 1/X_i before the block count drops to cn
  truncated_lengths,  // ℓ*_n and ℓ̂*_n up to the block count cn
  sfs,                // site frequency spectrum and conditional Poisson dispersion
};

std::string to_string(Experiment e);
/// total, external, internal, orders, mergers, hitting, harmonic, truncated, sfs.
Experiment parse_experiment(const std::string& name);

struct ExperimentConfig {
  std::string model = "bs";
  std::vector<int> n_grid{100, 1000, 10000, 100000};
  long replicates = 200;
  std::uint64_t seed = 1;
  double theta = 1.0;
  std::vector<double> c_list{0.5};
  int a_max = 5;
  std::vector<std::string> stats;
  std::string out;
  std::string format = "csv";
  int threads = 1;
  bool force = false;
  bool reproducible = false;

  /// Throws InvalidInput for an empty statistic list, a non-increasing grid,
  /// R < 1, c outside (0, 1) or an invalid model.
  void validate() const;
};

/// key = value lines; '#' starts a comment. Errors are reported as
/// "<source>:<line>: message".
ExperimentConfig parse_config(std::istream& in, const std::string& source);
ExperimentConfig load_config(const std::string& path);

struct RatioRow {
  std::string model;
  std::string statistic;
  /// integral_form, slowly_varying_form, oracle (exact expectation) or target (constant).
  std::string form;
  double n = 0.0;
  /// c for threshold statistics, a for order statistics, θ for sfs rows.
  double parameter = 0.0;
  long replicates = 0;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double prediction = 0.0;
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// Comma-free list joined by ';': hypothesis-unverified, forced, undefined.
  std::string flags;
};

/// Runs experiments for one configuration, sharing one ensemble per n.
class Verifier {
 public:
  explicit Verifier(ExperimentConfig config);

  const ExperimentConfig& config() const noexcept { return config_; }
  const Predictor& predictor() const noexcept { return *predictor_; }
  const RateTable& table() const noexcept { return *table_; }

  std::vector<RatioRow> run(Experiment e);
  /// Every experiment listed in config().stats, in order.
  std::vector<RatioRow> run_all();

  /// Ensemble at sample size n (simulated on first use).
  const EnsembleStats& ensemble(int n);

 private:
  /// Applies the hypothesis gate; returns the flags rows should carry.
  std::string gate(Experiment e) const;
  std::uint64_t seed_for(int n) const;

  ExperimentConfig config_;
  std::unique_ptr<Predictor> predictor_;
  std::unique_ptr<RateTable> table_;
  std::map<int, EnsembleStats> ensembles_;
};

Table ratio_table(const std::vector<RatioRow>& rows);

}  // namespace lamcoal
