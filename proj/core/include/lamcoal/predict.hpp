#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lamcoal/measure.hpp"
#include "lamcoal/rates.hpp"

namespace lamcoal {

enum class Statistic {
  total_length,
  external_length,
  internal_length,
  order_a_length,
  sfs_count,
  segregating_sites,
  merger_count,
  hitting_time,
  harmonic_sum,
  truncated_total,
  truncated_external,
};

enum class Form { integral_form, slowly_varying_form };

std::string to_string(Statistic s);
std::string to_string(Form f);
/// Accepts the names produced by to_string(Statistic) plus short aliases
/// (total, external, internal, order, sfs, sites, mergers, time, harmonic).
Statistic parse_statistic(const std::string& name);

struct Prediction {
  std::string model;
  double n = 0.0;
  Statistic statistic = Statistic::total_length;
  Form form = Form::integral_form;
  /// Order a for order_a_length / sfs_count, otherwise 0.
  int a = 0;
  /// r for merger_count / hitting_time / harmonic_sum, c for truncated_*, θ for sfs and sites.
  double parameter = 0.0;
  double value = 0.0;
  /// Set when the classification could not confirm the hypotheses behind the value.
  bool hypothesis_unverified = false;
};

/// Asymptotic predictions for one model. All quantities are evaluated from
/// the rate functions (closed forms where available, quadrature otherwise).
class Predictor {
 public:
  explicit Predictor(LambdaMeasure measure, std::optional<RVProfile> rv_hint = std::nullopt);

  const LambdaMeasure& measure() const noexcept { return measure_; }
  const Classification& classification() const noexcept { return classification_; }

  double mu(double x) const;
  double lambda(double x) const;

  /// ∫_2^n x/μ(x) dx.
  double total_length(double n) const;
  /// n^2 / μ(n).
  double external_length(double n) const;
  /// ∫_2^n (x/μ(x) - n/μ(n)) dx.
  double internal_length_integral(double n) const;
  /// n L(n) / L*(n)^2 (exponent-1 regular variation only).
  double internal_length_slowly_varying(double n) const;
  /// a = 1: n / L*(n); a >= 2: n L(n) / ((a-1) a L*(n)^2).
  double order_length(double n, int a) const;
  /// θ times the order-a length; for a = 1 and `form` integral, θ n^2/μ(n).
  double sfs_count(double n, int a, double theta, Form form) const;
  /// θ ∫_2^n x/μ(x) dx.
  double segregating_sites(double n, double theta) const;
  /// ∫_r^n dx/ν(x).
  double merger_count(double n, double r) const;
  /// ∫_r^n dx/μ(x).
  double hitting_time(double n, double r) const;
  /// log(κ(n)/κ(r)).
  double harmonic_sum(double n, double r) const;
  /// (∫_{cn}^n x/μ(x) dx, (1 - c) n^2/μ(n)).
  std::pair<double, double> truncated(double n, double c) const;

  /// Throws HypothesisError when dust is present; returns true when it is unverified.
  bool check_no_dust(const std::string& what) const;
  /// The exponent-1 profile; throws HypothesisError when unavailable.
  const RVProfile& require_alpha_one(const std::string& what) const;
  bool has_alpha_one() const noexcept;

  struct Request {
    std::vector<Statistic> stats;
    double theta = 1.0;
    /// Threshold r for the chain statistics; when empty r = c n with c below.
    std::optional<double> r;
    double c = 0.5;
    /// Orders reported for order_a_length and sfs_count.
    int a_max = 3;
  };
  /// Every requested statistic in every form available for this model.
  std::vector<Prediction> evaluate(double n, const Request& request) const;

 private:
  /// ∫_lo^hi g(x) dx on a geometric subdivision.
  double integrate_log_scale(const RealFn& g, double lo, double hi) const;

  LambdaMeasure measure_;
  Classification classification_;
};

}  // namespace lamcoal
