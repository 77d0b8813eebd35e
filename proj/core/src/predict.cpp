#include "lamcoal/predict.hpp"

#include <cmath>

#include "lamcoal/error.hpp"

namespace lamcoal {

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::total_length:
      return "total_length";
    case Statistic::external_length:
      return "external_length";
    case Statistic::internal_length:
      return "internal_length";
    case Statistic::order_a_length:
      return "order_a_length";
    case Statistic::sfs_count:
      return "sfs_count";
    case Statistic::segregating_sites:
      return "segregating_sites";
    case Statistic::merger_count:
      return "merger_count";
    case Statistic::hitting_time:
      return "hitting_time";
    case Statistic::harmonic_sum:
      return "harmonic_sum";
    case Statistic::truncated_total:
      return "truncated_total";
    case Statistic::truncated_external:
      return "truncated_external";
  }
  return "unknown";
}

std::string to_string(Form f) {
  return f == Form::integral_form ? "integral_form" : "slowly_varying_form";
}

Statistic parse_statistic(const std::string& name) {
  static const std::pair<const char*, Statistic> table[] = {
      {"total_length", Statistic::total_length},
      {"total", Statistic::total_length},
      {"external_length", Statistic::external_length},
      {"external", Statistic::external_length},
      {"internal_length", Statistic::internal_length},
      {"internal", Statistic::internal_length},
      {"order_a_length", Statistic::order_a_length},
      {"order", Statistic::order_a_length},
      {"sfs_count", Statistic::sfs_count},
      {"sfs", Statistic::sfs_count},
      {"segregating_sites", Statistic::segregating_sites},
      {"sites", Statistic::segregating_sites},
      {"merger_count", Statistic::merger_count},
      {"mergers", Statistic::merger_count},
      {"hitting_time", Statistic::hitting_time},
      {"time", Statistic::hitting_time},
      {"harmonic_sum", Statistic::harmonic_sum},
      {"harmonic", Statistic::harmonic_sum},
      {"truncated_total", Statistic::truncated_total},
      {"truncated_external", Statistic::truncated_external},
  };
  for (const auto& [key, value] : table) {
    if (name == key) return value;
  }
  throw InvalidInput("unknown statistic '" + name + "'");
}

Predictor::Predictor(LambdaMeasure measure, std::optional<RVProfile> rv_hint)
    : measure_(std::move(measure)), classification_(classify(measure_, rv_hint)) {}

double Predictor::mu(double x) const { return decrease_rate(measure_, x); }
double Predictor::lambda(double x) const { return total_rate(measure_, x); }

double Predictor::integrate_log_scale(const RealFn& g, double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  const double s0 = std::log(lo);
  const double s1 = std::log(hi);
  std::vector<double> breaks;
  for (double s = s0; s < s1; s += 1.0) breaks.push_back(s);
  breaks.push_back(s1);
  QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  return integrate_pieces(
      [&g](double s) {
        const double x = std::exp(s);
        return g(x) * x;
      },
      breaks, opts);
}

namespace {
void require_n(double n) {
  if (!(n >= 2.0) || !std::isfinite(n)) {
    throw InvalidInput("sample size must be at least 2; got " + format_number(n));
  }
}
void require_r(double n, double r) {
  if (!(r >= 2.0 && r <= n)) {
    throw InvalidInput("threshold r must satisfy 2 <= r <= n; got r=" + format_number(r) +
                       ", n=" + format_number(n));
  }
}
}  // namespace

double Predictor::total_length(double n) const {
  require_n(n);
  return integrate_log_scale([this](double x) { return x / mu(x); }, 2.0, n);
}

double Predictor::external_length(double n) const {
  require_n(n);
  return n * n / mu(n);
}

double Predictor::internal_length_integral(double n) const {
  require_n(n);
  const double tail = n / mu(n);
  // x/μ(x) decreases, so the integrand is nonnegative; clamp rounding.
  return integrate_log_scale([this, tail](double x) { return std::max(x / mu(x) - tail, 0.0); },
                             2.0, n);
}

double Predictor::internal_length_slowly_varying(double n) const {
  require_n(n);
  const RVProfile& p = require_alpha_one("internal length in slowly varying form");
  const double ls = lstar(p, n);
  return n * p.L(n) / (ls * ls);
}

double Predictor::order_length(double n, int a) const {
  require_n(n);
  if (a < 1) throw InvalidInput("order a must be at least 1");
  const RVProfile& p = require_alpha_one("order-a length prediction");
  const double ls = lstar(p, n);
  if (a == 1) return n / ls;
  return n * p.L(n) / ((a - 1.0) * a * ls * ls);
}

double Predictor::sfs_count(double n, int a, double theta, Form form) const {
  if (!(theta >= 0.0)) throw InvalidInput("theta must be nonnegative");
  if (a == 1 && form == Form::integral_form) return theta * external_length(n);
  if (form == Form::integral_form) {
    throw InvalidInput("sfs_count for a >= 2 exists only in slowly varying form");
  }
  return theta * order_length(n, a);
}

double Predictor::segregating_sites(double n, double theta) const {
  if (!(theta >= 0.0)) throw InvalidInput("theta must be nonnegative");
  return theta * total_length(n);
}

double Predictor::merger_count(double n, double r) const {
  require_n(n);
  require_r(n, r);
  return integrate_log_scale([this](double x) { return lambda(x) / mu(x); }, r, n);
}

double Predictor::hitting_time(double n, double r) const {
  require_n(n);
  require_r(n, r);
  return integrate_log_scale([this](double x) { return 1.0 / mu(x); }, r, n);
}

double Predictor::harmonic_sum(double n, double r) const {
  require_n(n);
  require_r(n, r);
  return std::log(kappa(measure_, n) / kappa(measure_, r));
}

std::pair<double, double> Predictor::truncated(double n, double c) const {
  require_n(n);
  if (!(c > 0.0 && c < 1.0)) {
    throw InvalidInput("truncation level c must lie in (0, 1); got " + format_number(c));
  }
  const double lo = std::max(c * n, 2.0);
  const double total = integrate_log_scale([this](double x) { return x / mu(x); }, lo, n);
  return {total, (1.0 - c) * external_length(n)};
}

bool Predictor::check_no_dust(const std::string& what) const {
  if (classification_.dust == Tri::yes) {
    throw HypothesisError(what + " requires a coalescent without dust; model '" +
                          measure_.label() + "' has a dust component");
  }
  return classification_.dust == Tri::unknown;
}

bool Predictor::has_alpha_one() const noexcept {
  return classification_.rv && classification_.rv->alpha == 1.0;
}

const RVProfile& Predictor::require_alpha_one(const std::string& what) const {
  if (!classification_.rv) {
    throw HypothesisError(what + " requires a regularly varying tail with exponent 1; no profile "
                          "is known for model '" + measure_.label() + "'");
  }
  if (classification_.rv->alpha != 1.0) {
    throw HypothesisError(what + " requires regular variation with exponent 1; model '" +
                          measure_.label() + "' has exponent " +
                          format_number(classification_.rv->alpha));
  }
  return *classification_.rv;
}

std::vector<Prediction> Predictor::evaluate(double n, const Request& req) const {
  require_n(n);
  std::vector<Prediction> out;
  const bool unverified = check_no_dust("prediction");
  auto push = [&](Statistic s, Form f, int a, double param, double value) {
    Prediction p;
    p.model = measure_.label();
    p.n = n;
    p.statistic = s;
    p.form = f;
    p.a = a;
    p.parameter = param;
    p.value = value;
    p.hypothesis_unverified = unverified;
    out.push_back(p);
  };
  const bool rv1 = has_alpha_one();
  const double r = req.r.value_or(std::max(2.0, req.c * n));
  for (Statistic s : req.stats) {
    switch (s) {
      case Statistic::total_length:
        push(s, Form::integral_form, 0, 0.0, total_length(n));
        break;
      case Statistic::external_length:
        push(s, Form::integral_form, 0, 0.0, external_length(n));
        break;
      case Statistic::internal_length:
        push(s, Form::integral_form, 0, 0.0, internal_length_integral(n));
        if (rv1) push(s, Form::slowly_varying_form, 0, 0.0, internal_length_slowly_varying(n));
        break;
      case Statistic::order_a_length:
      case Statistic::sfs_count: {
        const bool sfs = s == Statistic::sfs_count;
        const double scale = sfs ? req.theta : 1.0;
        const double param = sfs ? req.theta : 0.0;
        push(s, Form::integral_form, 1, param, scale * external_length(n));
        if (rv1) {
          for (int a = 1; a <= req.a_max; ++a) {
            push(s, Form::slowly_varying_form, a, param, scale * order_length(n, a));
          }
        }
        break;
      }
      case Statistic::segregating_sites:
        push(s, Form::integral_form, 0, req.theta, segregating_sites(n, req.theta));
        break;
      case Statistic::merger_count:
        push(s, Form::integral_form, 0, r, merger_count(n, r));
        break;
      case Statistic::hitting_time:
        push(s, Form::integral_form, 0, r, hitting_time(n, r));
        break;
      case Statistic::harmonic_sum:
        push(s, Form::integral_form, 0, r, harmonic_sum(n, r));
        break;
      case Statistic::truncated_total:
        push(s, Form::integral_form, 0, req.c, truncated(n, req.c).first);
        break;
      case Statistic::truncated_external:
        push(s, Form::integral_form, 0, req.c, truncated(n, req.c).second);
        break;
    }
  }
  return out;
}

}  // namespace lamcoal
