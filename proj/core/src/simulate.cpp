#include "lamcoal/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "lamcoal/error.hpp"
#include "lamcoal/numerics.hpp"

namespace lamcoal {

BlockConfiguration BlockConfiguration::singletons(int n) {
  if (n < 1) throw InvalidInput("sample size must be positive");
  BlockConfiguration c;
  c.n_ = n;
  c.blocks_ = n;
  c.counts_ = {{1, n}};
  return c;
}

BlockConfiguration BlockConfiguration::from_counts(int n, std::vector<std::pair<int, int>> counts) {
  std::sort(counts.begin(), counts.end());
  BlockConfiguration c;
  c.n_ = n;
  long total = 0;
  for (const auto& [size, count] : counts) {
    if (size < 1 || count < 0) throw InvalidInput("block sizes must be >= 1 and counts >= 0");
    if (count == 0) continue;
    if (!c.counts_.empty() && c.counts_.back().first == size) {
      c.counts_.back().second += count;
    } else {
      c.counts_.emplace_back(size, count);
    }
    c.blocks_ += count;
    total += static_cast<long>(size) * count;
  }
  if (total != n) {
    throw InvalidInput("block sizes sum to " + std::to_string(total) + ", expected " +
                       std::to_string(n));
  }
  return c;
}

int BlockConfiguration::count(int size) const {
  const auto it = std::lower_bound(counts_.begin(), counts_.end(), std::make_pair(size, 0));
  return (it != counts_.end() && it->first == size) ? it->second : 0;
}

int BlockConfiguration::merge(const std::vector<int>& taken) {
  int new_size = 0;
  int merged = 0;
  std::size_t w = 0;
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    const int t = j < taken.size() ? taken[j] : 0;
    new_size += t * counts_[j].first;
    merged += t;
    counts_[j].second -= t;
    if (counts_[j].second > 0) counts_[w++] = counts_[j];
  }
  counts_.resize(w);
  const auto it =
      std::lower_bound(counts_.begin(), counts_.end(), std::make_pair(new_size, 0));
  if (it != counts_.end() && it->first == new_size) {
    ++it->second;
  } else {
    counts_.insert(it, {new_size, 1});
  }
  blocks_ -= merged - 1;
  return new_size;
}

int sample_hypergeometric(int population, int successes, int draws, Rng& rng) {
  const int N = population;
  int K = successes;
  int d = draws;
  if (d <= 0 || K <= 0) return 0;
  if (K >= N) return d;
  if (d >= N) return K;
  // Reduce to d, K <= N/2 through the two complement symmetries.
  if (2 * d > N) return K - sample_hypergeometric(N, K, N - d, rng);
  if (2 * K > N) return d - sample_hypergeometric(N, N - K, d, rng);
  if (d <= 16) {
    int x = 0;
    for (int i = 0; i < d; ++i) {
      if (rng.uniform() * (N - i) < K - x) ++x;
    }
    return x;
  }
  // Inversion, enumerating outcomes outward from the mode.
  const int lo = std::max(0, d - (N - K));
  const int hi = std::min(d, K);
  int m = static_cast<int>((static_cast<double>(d) + 1.0) * (K + 1.0) / (N + 2.0));
  m = std::clamp(m, lo, hi);
  const double log_pm = log_binomial(K, m) + log_binomial(N - K, d - m) - log_binomial(N, d);
  const double pm = std::exp(log_pm);
  double u = rng.uniform() - pm;
  if (u < 0.0) return m;
  int left = m;
  int right = m;
  double pl = pm;
  double pr = pm;
  while (left > lo || right < hi) {
    if (right < hi) {
      pr *= static_cast<double>(K - right) * (d - right) /
            ((right + 1.0) * (N - K - d + right + 1.0));
      ++right;
      u -= pr;
      if (u < 0.0) return right;
    }
    if (left > lo) {
      pl *= static_cast<double>(left) * (N - K - d + left) / ((K - left + 1.0) * (d - left + 1.0));
      --left;
      u -= pl;
      if (u < 0.0) return left;
    }
  }
  return m;
}

namespace {

// Chooses k blocks uniformly, class by class; fills taken[j] for each size class.
void choose_blocks(const BlockConfiguration& config, int k, Rng& rng, std::vector<int>& taken) {
  const auto& counts = config.counts();
  taken.assign(counts.size(), 0);
  int remaining = config.blocks();
  int draws = k;
  for (std::size_t j = 0; j < counts.size() && draws > 0; ++j) {
    const int c = counts[j].second;
    const int x = sample_hypergeometric(remaining, c, draws, rng);
    taken[j] = x;
    draws -= x;
    remaining -= c;
  }
}

std::vector<std::pair<int, int>> merged_pairs(const BlockConfiguration& config,
                                              const std::vector<int>& taken) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t j = 0; j < taken.size(); ++j) {
    if (taken[j] > 0) out.emplace_back(config.counts()[j].first, taken[j]);
  }
  return out;
}

}  // namespace

std::string threshold_key(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", r);
  return buf;
}

StepResult step(BlockConfiguration& config, const RateTable& table, Rng& rng) {
  const int b = config.blocks();
  if (b < 2) throw InvalidInput("step needs at least two blocks");
  StepResult res;
  res.waiting_time = rng.exponential(table.lambda(b));
  res.k = table.sample_merger_size(b, rng.uniform());
  std::vector<int> taken;
  choose_blocks(config, res.k, rng, taken);
  res.merged = merged_pairs(config, taken);
  res.new_size = config.merge(taken);
  return res;
}

RunStats run(int n, const RateTable& table, const RunOptions& options, Rng& rng) {
  if (n < 2) throw InvalidInput("run needs n >= 2");
  if (n > table.bmax()) {
    throw InvalidInput("sample size " + std::to_string(n) + " exceeds rate table bmax " +
                       std::to_string(table.bmax()));
  }
  const int a_max = options.a_max > 0 ? std::min(options.a_max, n - 1) : std::min(n - 1, 20);

  // Thresholds visited from the largest r down.
  std::vector<std::size_t> order_idx(options.thresholds.size());
  for (std::size_t j = 0; j < order_idx.size(); ++j) {
    const double r = options.thresholds[j];
    if (!(r >= 2.0 && r <= n)) {
      throw InvalidInput("threshold r=" + threshold_key(r) + " outside [2, n]");
    }
    order_idx[j] = j;
  }
  std::stable_sort(order_idx.begin(), order_idx.end(), [&](std::size_t x, std::size_t y) {
    return options.thresholds[x] > options.thresholds[y];
  });

  RunStats st;
  st.n = n;
  st.sections.resize(options.thresholds.size());
  if (options.record_path) st.path = ChainPath{n, {}};

  BlockConfiguration config = BlockConfiguration::singletons(n);
  CompensatedSum total;
  CompensatedSum time;
  CompensatedSum rb;
  CompensatedSum harmonic;
  CompensatedSum overflow;
  std::vector<CompensatedSum> order(static_cast<std::size_t>(a_max));
  double survival = 1.0;  // Π_{m<i} (1 - 1/X_m)
  std::size_t next = 0;
  long i = 0;
  std::vector<int> taken;

  for (;;) {
    const int x = config.blocks();
    while (next < order_idx.size() && x <= options.thresholds[order_idx[next]]) {
      Section& s = st.sections[order_idx[next]];
      s.r = options.thresholds[order_idx[next]];
      s.rho = i;
      s.time = time.value();
      s.total = total.value();
      s.external = order[0].value();
      s.harmonic = harmonic.value();
      ++next;
    }
    if (x == 1) break;

    const double w = rng.exponential(table.lambda(x));
    total += w * x;
    time += w;
    int small_blocks = 0;
    for (const auto& [size, count] : config.counts()) {
      if (size > a_max) break;
      order[static_cast<std::size_t>(size - 1)] += w * count;
      small_blocks += count;
    }
    if (small_blocks < x) overflow += w * (x - small_blocks);
    rb += w * (x - 1.0) * survival;
    survival *= 1.0 - 1.0 / x;
    harmonic += 1.0 / x;

    const int k = table.sample_merger_size(x, rng.uniform());
    choose_blocks(config, k, rng, taken);
    if (st.path) st.path->entries.push_back({x, w, k, merged_pairs(config, taken)});
    config.merge(taken);
    ++i;
  }

  st.total = total.value();
  st.order.resize(order.size());
  for (std::size_t a = 0; a < order.size(); ++a) st.order[a] = order[a].value();
  st.external = st.order[0];
  st.internal = st.total - st.external;
  st.overflow = overflow.value();
  st.mergers = i;
  st.time = time.value();
  st.rb_external = rb.value() * n / (n - 1.0);
  return st;
}

double rb_external_estimate(const ChainPath& path) {
  if (path.n < 2 || path.entries.empty() || path.entries.front().blocks != path.n) {
    throw InvalidInput("rb_external_estimate needs a complete path starting at n");
  }
  int x_end = path.entries.back().blocks - (path.entries.back().k - 1);
  if (x_end != 1) throw InvalidInput("rb_external_estimate needs a path ending in one block");
  CompensatedSum sum;
  double survival = 1.0;
  for (const auto& e : path.entries) {
    sum += e.waiting_time * (e.blocks - 1.0) * survival;
    survival *= 1.0 - 1.0 / e.blocks;
  }
  return sum.value() * path.n / (path.n - 1.0);
}

SfsSample sample_sfs(const RunStats& stats, double theta, Rng& rng) {
  if (!(theta >= 0.0)) throw InvalidInput("theta must be nonnegative");
  SfsSample s;
  s.theta = theta;
  s.counts.resize(stats.order.size());
  for (std::size_t a = 0; a < stats.order.size(); ++a) {
    s.counts[a] = rng.poisson(theta * stats.order[a]);
    s.segregating += s.counts[a];
  }
  s.segregating += rng.poisson(theta * stats.overflow);
  return s;
}

const Summary& EnsembleStats::at(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InvalidInput("no ensemble statistic named '" + name + "'");
  return summaries[static_cast<std::size_t>(it - names.begin())];
}

std::vector<std::string> record_names(const RunStats& p, bool with_sfs) {
  std::vector<std::string> out = {"total_length", "external_length", "internal_length"};
  for (std::size_t a = 1; a <= p.order.size(); ++a) out.push_back("order_length_" + std::to_string(a));
  out.insert(out.end(), {"overflow_length", "merger_count", "absorption_time", "rb_external"});
  for (const auto& s : p.sections) {
    const std::string r = threshold_key(s.r);
    out.insert(out.end(), {"rho@" + r, "rho_time@" + r, "truncated_total@" + r,
                           "truncated_external@" + r, "harmonic_sum@" + r});
  }
  if (with_sfs) {
    for (std::size_t a = 1; a <= p.order.size(); ++a) out.push_back("sfs_" + std::to_string(a));
    out.push_back("segregating_sites");
  }
  return out;
}

std::vector<double> flatten(const RunStats& st, const SfsSample* sfs) {
  std::vector<double> out = {st.total, st.external, st.internal};
  out.insert(out.end(), st.order.begin(), st.order.end());
  out.insert(out.end(), {st.overflow, static_cast<double>(st.mergers), st.time, st.rb_external});
  for (const auto& s : st.sections) {
    out.insert(out.end(), {static_cast<double>(s.rho), s.time, s.total, s.external, s.harmonic});
  }
  if (sfs != nullptr) {
    for (auto c : sfs->counts) out.push_back(static_cast<double>(c));
    out.push_back(static_cast<double>(sfs->segregating));
  }
  return out;
}

EnsembleStats replicate(int n, const RateTable& table, const EnsembleOptions& options) {
  if (options.replicates < 1) throw InvalidInput("replicate count must be at least 1");
  const auto R = static_cast<std::size_t>(options.replicates);
  std::vector<RunStats> runs(R);
  std::vector<SfsSample> sfs(options.theta ? R : 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= R || failed.load()) return;
      try {
        const std::uint64_t seed = stream_seed(options.seed, idx);
        Rng rng(seed);
        runs[idx] = run(n, table, options.run, rng);
        runs[idx].seed = seed;
        if (options.theta) sfs[idx] = sample_sfs(runs[idx], *options.theta, rng);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(R)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleStats ens;
  ens.n = n;
  ens.replicates = options.replicates;
  ens.seed = options.seed;
  ens.names = record_names(runs.front(), options.theta.has_value());
  ens.records.reserve(R);
  for (std::size_t i = 0; i < R; ++i) {
    ens.records.push_back(flatten(runs[i], options.theta ? &sfs[i] : nullptr));
  }
  const std::size_t cols = ens.names.size();
  ens.summaries.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    CompensatedSum sum;
    for (const auto& rec : ens.records) sum += rec[c];
    const double mean = sum.value() / static_cast<double>(R);
    CompensatedSum sq;
    for (const auto& rec : ens.records) sq += (rec[c] - mean) * (rec[c] - mean);
    Summary& s = ens.summaries[c];
    s.count = options.replicates;
    s.mean = mean;
    s.variance = R > 1 ? sq.value() / static_cast<double>(R - 1) : 0.0;
    s.se = std::sqrt(s.variance / static_cast<double>(R));
  }
  if (options.keep_runs) {
    ens.runs = std::move(runs);
    ens.sfs = std::move(sfs);
  } else {
    ens.records.clear();
  }
  return ens;
}

}  // namespace lamcoal
