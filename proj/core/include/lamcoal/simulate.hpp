#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lamcoal/rate_table.hpp"
#include "lamcoal/rng.hpp"

namespace lamcoal {

/// Multiset of block sizes: (size a, number of blocks c_a) sorted by size.
class BlockConfiguration {
 public:
  /// n singleton blocks.
  static BlockConfiguration singletons(int n);
  /// From explicit (size, count) pairs; validates sizes, counts and Σ a c_a = n.
  static BlockConfiguration from_counts(int n, std::vector<std::pair<int, int>> counts);

  int n() const noexcept { return n_; }
  int blocks() const noexcept { return blocks_; }
  int count(int size) const;
  const std::vector<std::pair<int, int>>& counts() const noexcept { return counts_; }

  /// Removes `taken[j]` blocks from the j-th size class and adds one block of
  /// the combined size. Returns the new block's size.
  int merge(const std::vector<int>& taken);

  bool operator==(const BlockConfiguration&) const = default;

 private:
  int n_ = 0;
  int blocks_ = 0;
  std::vector<std::pair<int, int>> counts_;
};

/// One merger event.
struct StepResult {
  double waiting_time = 0.0;
  int k = 0;
  int new_size = 0;
  /// (block size, number of merged blocks of that size).
  std::vector<std::pair<int, int>> merged;
};

/// Advances `config` by one merger: Exp(λ(b)) waiting time, k from the merger
/// distribution, participants drawn uniformly (multivariate hypergeometric
/// over size classes). Throws InvalidInput when fewer than two blocks remain.
StepResult step(BlockConfiguration& config, const RateTable& table, Rng& rng);

/// Number of successes when drawing `draws` items without replacement from
/// `population` items of which `successes` are marked.
int sample_hypergeometric(int population, int successes, int draws, Rng& rng);

struct PathEntry {
  int blocks = 0;  // X_i
  double waiting_time = 0.0;  // W_i
  int k = 0;  // merger size, jump Δ_{i+1} = k - 1
  std::vector<std::pair<int, int>> merged;
};

/// Embedded jump chain X_0 = n > X_1 > ... > X_τ = 1 with sojourn times.
struct ChainPath {
  int n = 0;
  std::vector<PathEntry> entries;  // one per visited state with X_i >= 2
};

/// Statistics recorded up to the first index with X_i <= r.
struct Section {
  double r = 0.0;
  long rho = 0;             // first index with X_i <= r
  double time = 0.0;        // ρ̃: time at which the block count drops to r or below
  double total = 0.0;       // ℓ*
  double external = 0.0;    // ℓ̂*
  double harmonic = 0.0;    // Σ_{i<ρ} 1/X_i
};

struct RunOptions {
  /// Largest order a with its own length; 0 selects min(n - 1, 20).
  int a_max = 0;
  /// Thresholds r in [2, n].
  std::vector<double> thresholds;
  bool record_path = false;
};

struct RunStats {
  int n = 0;
  std::uint64_t seed = 0;
  double total = 0.0;     // ℓ
  double external = 0.0;  // ℓ̂
  double internal = 0.0;  // ℓ̌ = ℓ - ℓ̂
  /// order[a - 1] = ℓ̂_a for a = 1..a_max.
  std::vector<double> order;
  /// Length of branches subtending more than a_max leaves.
  double overflow = 0.0;
  long mergers = 0;       // τ
  double time = 0.0;      // τ̃
  double rb_external = 0.0;
  std::vector<Section> sections;
  std::optional<ChainPath> path;
};

/// Simulates one n-coalescent to absorption.
RunStats run(int n, const RateTable& table, const RunOptions& options, Rng& rng);

/// (n/(n-1)) Σ_i W_i (X_i - 1) Π_{m<i} (1 - 1/X_m), the conditional
/// expectation of the external length given the block-counting path.
double rb_external_estimate(const ChainPath& path);

struct SfsSample {
  double theta = 0.0;
  /// counts[a - 1] = M_a for a = 1..a_max.
  std::vector<std::uint64_t> counts;
  std::uint64_t segregating = 0;
};

/// Poisson(θ ℓ̂_a) mutation counts per order, plus the overflow orders in S.
SfsSample sample_sfs(const RunStats& stats, double theta, Rng& rng);

struct Summary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double se = 0.0;
  long count = 0;
};

struct EnsembleOptions {
  RunOptions run;
  long replicates = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Draw one SFS sample per run when set.
  std::optional<double> theta;
  bool keep_runs = false;
};

struct EnsembleStats {
  int n = 0;
  long replicates = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> names;
  std::vector<Summary> summaries;
  /// Per-run flattened records in `names` order (kept on request).
  std::vector<std::vector<double>> records;
  std::vector<RunStats> runs;
  std::vector<SfsSample> sfs;

  const Summary& at(const std::string& name) const;
};

/// Suffix used for per-threshold record names, e.g. "rho@" + threshold_key(r).
std::string threshold_key(double r);

/// Column names of flatten(), in emission order.
std::vector<std::string> record_names(const RunStats& prototype, bool with_sfs);
/// Per-run scalar record in record_names() order.
std::vector<double> flatten(const RunStats& stats, const SfsSample* sfs);

/// R independent runs; replicate i uses the stream stream_seed(seed, i).
/// Results are reduced in replicate order, so they do not depend on `threads`.
EnsembleStats replicate(int n, const RateTable& table, const EnsembleOptions& options);

}  // namespace lamcoal
