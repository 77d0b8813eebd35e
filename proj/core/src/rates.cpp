#include "lamcoal/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/trigamma.hpp>

#include "lamcoal/error.hpp"

namespace lamcoal {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Integrand of ∫ f(p) Λ(dp)/p^2 in the forms needed by each representation.
struct Kernel {
  double zero_limit = 0.0;
  RealFn over_p2;     // f(p)/p^2 for p in (0, 1]
  RealFn derivative;  // f'(y), tail route
  double scale = 1.0;
  std::vector<double> hints;
};

void require_arg(double x) {
  if (!(x >= 2.0) || !std::isfinite(x)) {
    throw InvalidInput("rate functions need a real argument x >= 2; got " + format_number(x));
  }
}

Kernel lambda_kernel(double x) {
  Kernel k;
  k.zero_limit = x * (x - 1.0) / 2.0;
  k.scale = x;
  k.over_p2 = [x](double p) {
    if (p >= 1.0) return 1.0;
    const double w = (x - 1.0) * std::log1p(-p);
    const double f = -expm1_minus_z(w) - (x - 1.0) * log1m_plus(p) - (x - 1.0) * p * std::expm1(w);
    return f / (p * p);
  };
  k.derivative = [x](double y) {
    if (y >= 1.0) return x == 2.0 ? x * (x - 1.0) : 0.0;
    return x * (x - 1.0) * y * std::exp((x - 2.0) * std::log1p(-y));
  };
  return k;
}

Kernel mu_kernel(double x) {
  Kernel k;
  k.zero_limit = x * (x - 1.0) / 2.0;
  k.scale = x;
  k.over_p2 = [x](double p) {
    if (p >= 1.0) return x - 1.0;
    const double z = x * std::log1p(-p);
    return (x * log1m_plus(p) + expm1_minus_z(z)) / (p * p);
  };
  k.derivative = [x](double y) {
    if (y >= 1.0) return x;
    return -x * std::expm1((x - 1.0) * std::log1p(-y));
  };
  return k;
}

Kernel psi_kernel(double x) {
  Kernel k;
  k.zero_limit = x * x / 2.0;
  k.scale = x;
  k.over_p2 = [x](double p) { return expm1_minus_z(-x * p) / (p * p); };
  k.derivative = [x](double y) { return -x * std::expm1(-x * y); };
  return k;
}

Kernel kappa_prime_kernel(double x) {
  Kernel k;
  k.zero_limit = 0.5;
  k.scale = x;
  k.over_p2 = [x](double p) {
    if (p >= 1.0) return 1.0 / (x * x);
    const double z = x * std::log1p(-p);
    return z_exp_minus_expm1(z) / (x * x * p * p);
  };
  k.derivative = [x](double y) {
    if (y >= 1.0) return 0.0;
    return -std::exp((x - 1.0) * std::log1p(-y)) * std::log1p(-y);
  };
  return k;
}

// C(b,k) p^k (1-p)^(b-k), scaled by exp(-shift) to keep the quadrature in range.
Kernel weighted_pairwise_kernel(int b, int k, double shift) {
  const double bb = b;
  const double kk = k;
  const double lc = log_binomial(bb, kk) - shift;
  Kernel ker;
  ker.zero_limit = (k == 2) ? std::exp(lc) : 0.0;
  ker.scale = b;
  ker.hints = {std::clamp((kk - 1.0) / bb, 1e-300, 1.0 - 1e-16)};
  ker.over_p2 = [=](double p) {
    const double lq = (b == k) ? 0.0 : (bb - kk) * std::log1p(-p);
    return std::exp(lc + (kk - 2.0) * std::log(p) + lq);
  };
  ker.derivative = [=](double y) {
    if (b == k) return std::exp(lc + std::log(kk) + (kk - 1.0) * std::log(y));
    if (y >= 1.0) return (b - k == 1) ? -std::exp(lc) * (bb - kk) : 0.0;
    const double lq = (bb - kk - 1.0) * std::log1p(-y);
    return std::exp(lc + (kk - 1.0) * std::log(y) + lq) * (kk * (1.0 - y) - (bb - kk) * y);
  };
  return ker;
}

double part_integral(const ContinuousPart& part, const Kernel& k) {
  if (is_tail_represented(part)) {
    return integrate_unit_interval(
        [&](double y) { return k.derivative(y) * part_tail(part, y); }, k.scale, k.hints);
  }
  return integrate_unit_interval([&](double p) { return k.over_p2(p) * part_density(part, p); },
                                 k.scale, k.hints);
}

// Atoms: exact, never numerical.
double atoms_integral(const LambdaMeasure& m, const Kernel& k) {
  CompensatedSum s(m.atom_at_zero() * k.zero_limit);
  for (const auto& a : m.atoms()) s += a.mass * k.over_p2(a.location);
  return s.value();
}

bool beta_is_bs(const BetaDensity& b) { return b.a == 1.0 && b.c == 1.0; }
// Closed forms through analytically continued Beta functions fail at the poles a = 1, 2.
bool beta_has_continued_form(const BetaDensity& b) { return b.a != 1.0 && b.a != 2.0; }

std::optional<double> closed_total_rate(const ContinuousPart& part, double x) {
  const auto* b = std::get_if<BetaDensity>(&part);
  if (b == nullptr) return std::nullopt;
  if (beta_is_bs(*b)) return b->mass * (x - 1.0);
  if (!beta_has_continued_form(*b)) return std::nullopt;
  const double a = b->a;
  const double c = b->c;
  const double v =
      (beta_fn(a - 2.0, c) - beta_fn(a - 2.0, x + c) - x * beta_fn(a - 1.0, x + c - 1.0)) /
      beta_fn(a, c);
  return b->mass * v;
}

std::optional<double> closed_decrease_rate(const ContinuousPart& part, double x) {
  const auto* b = std::get_if<BetaDensity>(&part);
  if (b == nullptr) return std::nullopt;
  if (beta_is_bs(*b)) return b->mass * x * (harmonic(x) - 1.0);
  if (!beta_has_continued_form(*b)) return std::nullopt;
  const double a = b->a;
  const double c = b->c;
  const double v =
      (x * beta_fn(a - 1.0, c) - beta_fn(a - 2.0, c) + beta_fn(a - 2.0, x + c)) / beta_fn(a, c);
  return b->mass * v;
}

std::optional<double> closed_kappa_prime(const ContinuousPart& part, double x) {
  const auto* b = std::get_if<BetaDensity>(&part);
  if (b == nullptr) return std::nullopt;
  if (beta_is_bs(*b)) return b->mass * boost::math::trigamma(x + 1.0);
  if (!beta_has_continued_form(*b)) return std::nullopt;
  const double a = b->a;
  const double c = b->c;
  const double b0 = beta_fn(a - 2.0, c);
  const double bx = beta_fn(a - 2.0, x + c);
  const double dlog = digamma(x + c) - digamma(x + c + a - 2.0);
  const double v = (b0 - bx) / (x * x) + bx * dlog / x;
  return b->mass * v / beta_fn(a, c);
}

std::optional<double> closed_log_weighted_pairwise(const ContinuousPart& part, int b, int k) {
  const auto* beta = std::get_if<BetaDensity>(&part);
  if (beta == nullptr) return std::nullopt;
  int s1 = 1;
  int s2 = 1;
  const double num = log_abs_beta(k - 2.0 + beta->a, b - k + beta->c, &s1);
  const double den = log_abs_beta(beta->a, beta->c, &s2);
  return std::log(beta->mass) + log_binomial(b, k) + num - den;
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Sum over atoms and parts, preferring closed forms when the route allows it.
template <class Closed>
double evaluate(const LambdaMeasure& m, const Kernel& k, Route route, Closed closed) {
  CompensatedSum s(atoms_integral(m, k));
  for (const auto& part : m.parts()) {
    if (route == Route::automatic) {
      if (const auto v = closed(part)) {
        s += *v;
        continue;
      }
    }
    s += part_integral(part, k);
  }
  const double v = s.value();
  if (!std::isfinite(v)) throw NumericalError("non-finite rate value");
  return v;
}

}  // namespace

double integrate_mu_kernel(const LambdaMeasure& measure, const MuKernel& kernel) {
  if (!kernel.value && !kernel.over_p2) {
    throw InvalidInput("integrate_mu_kernel needs f or f/p^2");
  }
  Kernel k;
  k.scale = kernel.scale;
  k.hints = kernel.hints;
  k.over_p2 = kernel.over_p2 ? kernel.over_p2 : [f = kernel.value](double p) {
    return f(p) / (p * p);
  };
  if (kernel.limit_at_zero) {
    k.zero_limit = *kernel.limit_at_zero;
  } else {
    const double v3 = k.over_p2(1e-3);
    const double v4 = k.over_p2(1e-4);
    const double v5 = k.over_p2(1e-5);
    if (!std::isfinite(v5) || std::abs(v5) > 50.0 * std::abs(v3) + 1e3 * (1.0 + std::abs(v4))) {
      throw InvalidInput("kernel f must satisfy f(p) = O(p^2) as p -> 0");
    }
    k.zero_limit = (10.0 * v5 - v4) / 9.0;
  }
  if (kernel.derivative) {
    k.derivative = kernel.derivative;
  } else {
    const RealFn f = kernel.value ? kernel.value : [g = k.over_p2](double p) {
      return g(p) * p * p;
    };
    k.derivative = [f](double y) {
      const double h = 1e-6 * std::max(std::min(y, 1.0 - y), 1e-12);
      if (y + h > 1.0) return (f(y) - f(y - h)) / h;
      return (f(y + h) - f(y - h)) / (2.0 * h);
    };
  }
  return evaluate(measure, k, Route::quadrature, [](const ContinuousPart&) {
    return std::optional<double>{};
  });
}

double log_weighted_pairwise_rate(const LambdaMeasure& measure, int b, int k, Route route) {
  if (b < 2 || k < 2 || k > b) {
    throw InvalidInput("pairwise rate needs 2 <= k <= b; got b=" + std::to_string(b) +
                       ", k=" + std::to_string(k));
  }
  const double lc = log_binomial(b, k);
  double acc = kNegInf;
  if (k == 2 && measure.atom_at_zero() > 0.0) acc = std::log(measure.atom_at_zero()) + lc;
  for (const auto& a : measure.atoms()) {
    const double p = a.location;
    const double lq = (b == k) ? 0.0 : (b - k) * std::log1p(-p);
    acc = log_add(acc, std::log(a.mass) + lc + (k - 2.0) * std::log(p) + lq);
  }
  for (const auto& part : measure.parts()) {
    if (route == Route::automatic) {
      if (const auto v = closed_log_weighted_pairwise(part, b, k)) {
        acc = log_add(acc, *v);
        continue;
      }
    }
    // Scale the kernel so its peak is O(1): shift by the binomial mode magnitude.
    const double shift = std::min(lc, 0.0);
    const double v = part_integral(part, weighted_pairwise_kernel(b, k, shift));
    if (v > 0.0) acc = log_add(acc, std::log(v) + shift);
  }
  return acc;
}

double pairwise_rate(const LambdaMeasure& measure, int b, int k, Route route) {
  return std::exp(log_weighted_pairwise_rate(measure, b, k, route) - log_binomial(b, k));
}

double total_rate(const LambdaMeasure& measure, double x, Route route) {
  require_arg(x);
  return evaluate(measure, lambda_kernel(x), route,
                  [x](const ContinuousPart& p) { return closed_total_rate(p, x); });
}

double decrease_rate(const LambdaMeasure& measure, double x, Route route) {
  require_arg(x);
  return evaluate(measure, mu_kernel(x), route,
                  [x](const ContinuousPart& p) { return closed_decrease_rate(p, x); });
}

double kappa(const LambdaMeasure& measure, double x, Route route) {
  return decrease_rate(measure, x, route) / x;
}

double nu(const LambdaMeasure& measure, double x, Route route) {
  return decrease_rate(measure, x, route) / total_rate(measure, x, route);
}

double psi(const LambdaMeasure& measure, double x, Route route) {
  require_arg(x);
  (void)route;
  return evaluate(measure, psi_kernel(x), Route::quadrature,
                  [](const ContinuousPart&) { return std::optional<double>{}; });
}

double kappa_prime(const LambdaMeasure& measure, double x, std::optional<double> h) {
  const double step = h.value_or(std::max(1e-3 * x, 0.5));
  if (!(step > 0.0) || !(x - step >= 2.0)) {
    throw InvalidInput("kappa_prime needs x >= 2 + h");
  }
  return (kappa(measure, x + step) - kappa(measure, x - step)) / (2.0 * step);
}

double kappa_prime_exact(const LambdaMeasure& measure, double x, Route route) {
  require_arg(x);
  return evaluate(measure, kappa_prime_kernel(x), route,
                  [x](const ContinuousPart& p) { return closed_kappa_prime(p, x); });
}

std::vector<double> merger_pmf(const LambdaMeasure& measure, int b, Route route) {
  if (b < 2) throw InvalidInput("merger_pmf needs b >= 2");
  std::vector<double> pmf(static_cast<std::size_t>(b) + 1, 0.0);
  if (measure.as_pure_beta() && beta_is_bs(*measure.as_pure_beta()) && route == Route::automatic) {
    for (int k = 2; k <= b; ++k) {
      pmf[k] = static_cast<double>(b) / ((b - 1.0) * k * (k - 1.0));
    }
    return pmf;
  }
  const double log_total = std::log(total_rate(measure, b, route));
  for (int k = 2; k <= b; ++k) {
    pmf[k] = std::exp(log_weighted_pairwise_rate(measure, b, k, route) - log_total);
  }
  return pmf;
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::no:
      return "no";
    case Tri::yes:
      return "yes";
    case Tri::unknown:
      return "unknown";
  }
  return "unknown";
}

}  // namespace lamcoal
