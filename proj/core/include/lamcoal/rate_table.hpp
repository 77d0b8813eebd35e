#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "lamcoal/measure.hpp"

namespace lamcoal {

/// Per-block-count rates λ(b), μ(b) for b = 2..bmax and the merger-size
/// distributions. Immutable after construction; merger rows of generic
/// measures are generated on first use behind an internal lock, so a table
/// can be shared by concurrent readers.
class RateTable {
 public:
  enum class Kind { kingman, bolthausen_sznitman, beta, generic };

  struct Options {
    /// Check Σ_k C(b,k)λ_{b,k} = λ(b) and Σ_k (k-1)C(b,k)λ_{b,k} = μ(b) on sampled b.
    bool verify = true;
    double verify_tolerance = 1e-8;
  };

  RateTable(LambdaMeasure measure, int bmax);
  RateTable(LambdaMeasure measure, int bmax, Options options);

  int bmax() const noexcept { return bmax_; }
  Kind kind() const noexcept { return kind_; }
  const LambdaMeasure& measure() const noexcept { return measure_; }

  double lambda(int b) const { return lambda_[index(b)]; }
  double mu(int b) const { return mu_[index(b)]; }

  /// P(merger of size k | b blocks).
  double pmf(int b, int k) const;
  /// Merger size by inversion of the uniform variate u in [0, 1).
  int sample_merger_size(int b, double u) const;
  /// pmf(b, k) for k = 0..kmax (entries 0 and 1 zero), where kmax is b or the
  /// first k after which the remaining mass is below `tail`.
  std::vector<double> pmf_row(int b, double tail = 0.0) const;

 private:
  std::size_t index(int b) const;
  double beta_pmf2(int b) const;
  /// Cumulative distribution prefix for generic measures, extended to cover u.
  int generic_sample(int b, double u) const;
  void verify_at(int b, double tol) const;

  LambdaMeasure measure_;
  int bmax_ = 2;
  Kind kind_ = Kind::generic;
  BetaDensity beta_{1.0, 1.0, 1.0};
  std::vector<double> lambda_;
  std::vector<double> mu_;

  struct Row {
    std::vector<double> cdf;  // cdf[j] = P(k <= j + 2)
  };
  mutable std::mutex mutex_;
  mutable std::unordered_map<int, Row> rows_;
};

RateTable build_rate_table(const LambdaMeasure& measure, int bmax);

}  // namespace lamcoal
