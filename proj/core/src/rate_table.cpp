#include "lamcoal/rate_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lamcoal/error.hpp"
#include "lamcoal/rates.hpp"

namespace lamcoal {

RateTable::RateTable(LambdaMeasure measure, int bmax) : RateTable(std::move(measure), bmax, {}) {}

RateTable::RateTable(LambdaMeasure measure, int bmax, Options options)
    : measure_(std::move(measure)), bmax_(bmax) {
  if (bmax_ < 2) throw InvalidInput("rate table needs bmax >= 2");
  if (measure_.is_pure_kingman()) {
    kind_ = Kind::kingman;
  } else if (const auto b = measure_.as_pure_beta()) {
    beta_ = *b;
    kind_ = (b->a == 1.0 && b->c == 1.0) ? Kind::bolthausen_sznitman : Kind::beta;
  }
  const auto count = static_cast<std::size_t>(bmax_ - 1);
  lambda_.resize(count);
  mu_.resize(count);
  for (int b = 2; b <= bmax_; ++b) {
    double l = 0.0;
    double m = 0.0;
    try {
      if (kind_ == Kind::kingman) {
        l = m = measure_.atom_at_zero() * b * (b - 1.0) / 2.0;
      } else {
        l = total_rate(measure_, b);
        m = decrease_rate(measure_, b);
      }
    } catch (const NumericalError& e) {
      throw NumericalError("rate evaluation failed at b=" + std::to_string(b) + ": " + e.what());
    }
    if (!(l > 0.0) || !std::isfinite(l) || !std::isfinite(m)) {
      throw NumericalError("non-finite or non-positive rate at b=" + std::to_string(b));
    }
    // μ >= λ holds exactly; quadrature noise may leave μ a few ulps short.
    if (m < l * (1.0 - 1e-10)) {
      throw NumericalError("rate table violates mu(b) >= lambda(b) at b=" + std::to_string(b));
    }
    lambda_[index(b)] = l;
    mu_[index(b)] = std::max(m, l);
  }
  if (options.verify && kind_ != Kind::kingman) {
    for (int b : {2, 3, 5, 10, 30, 100, 200}) {
      if (b <= bmax_) verify_at(b, options.verify_tolerance);
    }
  }
}

std::size_t RateTable::index(int b) const {
  if (b < 2 || b > bmax_) {
    throw InvalidInput("block count " + std::to_string(b) + " outside rate table range [2, " +
                       std::to_string(bmax_) + "]");
  }
  return static_cast<std::size_t>(b - 2);
}

void RateTable::verify_at(int b, double tol) const {
  CompensatedSum total;
  CompensatedSum decrease;
  for (int k = 2; k <= b; ++k) {
    const double w = std::exp(log_weighted_pairwise_rate(measure_, b, k));
    total += w;
    decrease += (k - 1.0) * w;
  }
  const double l = lambda(b);
  const double m = mu(b);
  if (std::abs(total.value() - l) > tol * l || std::abs(decrease.value() - m) > tol * m) {
    throw NumericalError("dual-route rate check failed at b=" + std::to_string(b) +
                         ": lambda " + format_number(l) + " vs " +
                         format_number(total.value()) + ", mu " + format_number(m) + " vs " +
                         format_number(decrease.value()));
  }
}

double RateTable::beta_pmf2(int b) const {
  return std::exp(log_weighted_pairwise_rate(measure_, b, 2) - std::log(lambda(b)));
}

double RateTable::pmf(int b, int k) const {
  index(b);
  if (k < 2 || k > b) return 0.0;
  switch (kind_) {
    case Kind::kingman:
      return k == 2 ? 1.0 : 0.0;
    case Kind::bolthausen_sznitman:
      return static_cast<double>(b) / ((b - 1.0) * k * (k - 1.0));
    default:
      return std::exp(log_weighted_pairwise_rate(measure_, b, k) - std::log(lambda(b)));
  }
}

int RateTable::sample_merger_size(int b, double u) const {
  index(b);
  if (b == 2) return 2;
  switch (kind_) {
    case Kind::kingman:
      return 2;
    case Kind::bolthausen_sznitman: {
      // P(K >= k) = b (1/(k-1) - 1/b) / (b - 1), inverted in closed form;
      // K = k exactly when F(k-1) <= u < F(k).
      const double k = std::floor(b / (1.0 + (1.0 - u) * (b - 1.0))) + 1.0;
      return static_cast<int>(std::clamp(k, 2.0, static_cast<double>(b)));
    }
    case Kind::beta: {
      double p = beta_pmf2(b);
      double cdf = p;
      int k = 2;
      while (u >= cdf && k < b) {
        p *= (b - k) * (k - 2.0 + beta_.a) / ((k + 1.0) * (b - k - 1.0 + beta_.c));
        cdf += p;
        ++k;
      }
      return k;
    }
    case Kind::generic:
      return generic_sample(b, u);
  }
  return 2;
}

int RateTable::generic_sample(int b, double u) const {
  std::lock_guard<std::mutex> lock(mutex_);
  Row& row = rows_[b];
  auto it = std::upper_bound(row.cdf.begin(), row.cdf.end(), u);
  if (it != row.cdf.end()) return static_cast<int>(it - row.cdf.begin()) + 2;
  const double log_l = std::log(lambda(b));
  while (static_cast<int>(row.cdf.size()) < b - 1) {
    const int k = static_cast<int>(row.cdf.size()) + 2;
    const double prev = row.cdf.empty() ? 0.0 : row.cdf.back();
    row.cdf.push_back(prev + std::exp(log_weighted_pairwise_rate(measure_, b, k) - log_l));
    if (u < row.cdf.back()) return k;
  }
  return b;
}

std::vector<double> RateTable::pmf_row(int b, double tail) const {
  index(b);
  std::vector<double> row(static_cast<std::size_t>(b) + 1, 0.0);
  if (kind_ == Kind::kingman || b == 2) {
    row[2] = 1.0;
    row.resize(3);
    return row;
  }
  double cdf = 0.0;
  double p = kind_ == Kind::beta ? beta_pmf2(b) : 0.0;
  for (int k = 2; k <= b; ++k) {
    if (kind_ == Kind::beta) {
      if (k > 2) p *= (b - k + 1.0) * (k - 3.0 + beta_.a) / (k * (b - k + beta_.c));
    } else {
      p = pmf(b, k);
    }
    row[k] = p;
    cdf += p;
    if (tail > 0.0 && 1.0 - cdf < tail) {
      row.resize(static_cast<std::size_t>(k) + 1);
      break;
    }
  }
  return row;
}

RateTable build_rate_table(const LambdaMeasure& measure, int bmax) {
  return RateTable(measure, bmax);
}

}  // namespace lamcoal
