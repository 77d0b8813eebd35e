#include "lamcoal/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <array>
#include <limits>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "lamcoal/error.hpp"

namespace lamcoal {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Error policy: report problems through return values, never throw from boost.
using QuietPolicy = boost::math::policies::policy<
    boost::math::policies::domain_error<boost::math::policies::errno_on_error>,
    boost::math::policies::pole_error<boost::math::policies::errno_on_error>,
    boost::math::policies::overflow_error<boost::math::policies::errno_on_error>,
    boost::math::policies::evaluation_error<boost::math::policies::errno_on_error>>;

}  // namespace

namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;
};

// One 61-point Kronrod panel with the embedded 30-point Gauss rule, using the
// node and weight tables from Boost. Error and L1 norm are in the units of
// [a, b] (Boost 1.74 leaves the error of a single panel unscaled).
Panel make_panel(const RealFn& f, double a, double b) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
  using Gauss = boost::math::quadrature::gauss<double, 30>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double kronrod = f0 * wk[0];
  double gauss = 0.0;
  double l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    kronrod += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    // Gauss nodes sit at the odd Kronrod indices.
    if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
  }
  Panel p{a, b, 0.0, 0.0, 0.0};
  p.value = half * kronrod;
  p.error = half * std::max(std::abs(kronrod - gauss), 2.0 * std::numeric_limits<double>::epsilon() *
                                                          std::abs(kronrod));
  p.l1 = half * l1;
  return p;
}

std::string interval_text(double a, double b) {
  std::ostringstream os;
  os << "[" << a << ", " << b << "]";
  return os.str();
}

}  // namespace

double integrate_pieces(const RealFn& f, std::span<const double> breakpoints,
                        const QuadratureOptions& opts) {
  if (breakpoints.size() < 2) return 0.0;
  // A semi-infinite last piece is mapped onto [0, 1) first.
  RealFn g = f;
  std::vector<double> pts(breakpoints.begin(), breakpoints.end());
  const double lo = pts.front();
  const double hi = pts.back();
  if (std::isinf(hi)) {
    if (std::isinf(lo)) throw InvalidInput("integrate needs a finite lower limit");
    // u = lo + t / (1 - t)
    g = [&f, lo](double t) {
      if (t >= 1.0) return 0.0;
      const double s = 1.0 - t;
      return f(lo + t / s) / (s * s);
    };
    for (auto& v : pts) v = std::isinf(v) ? 1.0 : (v - lo) / (1.0 + v - lo);
  }
  auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::vector<Panel> heap;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) heap.push_back(make_panel(g, pts[i], pts[i + 1]));
  }
  std::make_heap(heap.begin(), heap.end(), worse);
  auto totals = [&heap]() {
    CompensatedSum v;
    CompensatedSum e;
    CompensatedSum l;
    for (const auto& p : heap) {
      v += p.value;
      e += p.error;
      l += p.l1;
    }
    return std::array<double, 3>{v.value(), e.value(), l.value()};
  };
  auto [value, error, l1] = totals();
  const double eps = std::numeric_limits<double>::epsilon();
  while (!heap.empty()) {
    if (!std::isfinite(value) || !std::isfinite(error)) break;
    const double target = std::max({opts.rel_tol * std::abs(value), opts.abs_tol, 50.0 * eps * l1});
    if (error <= target || heap.size() >= opts.max_panels) break;
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), worse);
      break;
    }
    const Panel left = make_panel(g, worst.a, mid);
    const Panel right = make_panel(g, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), worse);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
  }
  // Re-sum from the panels to shed drift from the incremental updates.
  const auto final_totals = totals();
  value = final_totals[0];
  error = final_totals[1];
  l1 = final_totals[2];
  if (!std::isfinite(value)) {
    throw NumericalError("quadrature produced a non-finite value on " +
                         interval_text(breakpoints.front(), breakpoints.back()));
  }
  if (error > std::max(1e-6 * l1, opts.abs_tol) && error > 1e-300) {
    std::ostringstream os;
    os << "quadrature failed to converge on " << interval_text(breakpoints.front(), breakpoints.back())
       << ": error estimate " << error << " vs L1 norm " << l1;
    throw NumericalError(os.str());
  }
  return value;
}

double integrate(const RealFn& f, double a, double b, const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  const double pts[2] = {a, b};
  return integrate_pieces(f, pts, opts);
}

std::vector<double> unit_interval_breakpoints(double scale, std::span<const double> hints) {
  const double ls = std::log(std::max(scale, 1.0));
  std::vector<double> u{0.0, 0.25, 1.0};
  for (double d : {-3.0, 0.0, 3.0, 8.0, 20.0, 45.0, 90.0}) {
    u.push_back(ls + d);
  }
  for (double p : hints) {
    if (!(p > 0.0) || !(p < 1.0)) continue;
    const double us = -std::log(p);
    for (double f : {0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0}) {
      u.push_back(us * f);
    }
  }
  std::erase_if(u, [](double v) { return !(v >= 0.0) || !std::isfinite(v); });
  std::sort(u.begin(), u.end());
  std::vector<double> out;
  for (double v : u) {
    if (out.empty() || v > out.back() * (1.0 + 1e-9) + 1e-12) out.push_back(v);
  }
  // exp(-700) is below the cut-off where the integrand is treated as zero.
  std::erase_if(out, [](double v) { return v >= 700.0; });
  out.push_back(700.0);
  return out;
}

double integrate_unit_interval(const RealFn& h, double scale, std::span<const double> hints,
                               const QuadratureOptions& opts) {
  const auto breaks = unit_interval_breakpoints(scale, hints);
  const RealFn g = [&h](double u) {
    const double p = std::exp(-u);
    if (p < 1e-300) return 0.0;
    const double v = h(p) * p;
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate_pieces(g, breaks, opts);
}

double log_gamma(double x) { return boost::math::lgamma(x, QuietPolicy()); }

namespace {
bool gamma_pole(double x) { return x <= 0.0 && x == std::floor(x); }
}  // namespace

double log_abs_beta(double a, double b, int* sign) {
  if (gamma_pole(a) || gamma_pole(b)) {
    throw NumericalError("Beta function evaluated at a pole");
  }
  if (gamma_pole(a + b)) {
    // Finite numerator over an infinite Γ(a + b).
    if (sign != nullptr) *sign = 0;
    return -std::numeric_limits<double>::infinity();
  }
  int sa = 1;
  int sb = 1;
  int sab = 1;
  const double la = boost::math::lgamma(a, &sa, QuietPolicy());
  const double lb = boost::math::lgamma(b, &sb, QuietPolicy());
  const double lab = boost::math::lgamma(a + b, &sab, QuietPolicy());
  if (sign != nullptr) *sign = sa * sb * sab;
  return la + lb - lab;
}

double beta_fn(double a, double b) {
  if (gamma_pole(a) || gamma_pole(b)) {
    throw NumericalError("Beta function evaluated at a pole");
  }
  if (gamma_pole(a + b)) return 0.0;
  // B(a, b) = B(a + 1, b) (a + b) / a moves both arguments to the positive
  // half-line, where the Lanczos-based evaluation is accurate to a few ulps.
  double factor = 1.0;
  while (a < 0.0) {
    factor *= (a + b) / a;
    a += 1.0;
  }
  while (b < 0.0) {
    factor *= (a + b) / b;
    b += 1.0;
  }
  const double v = boost::math::beta(a, b, QuietPolicy());
  if (v == 0.0 || !std::isfinite(v)) return factor * std::exp(log_abs_beta(a, b, nullptr));
  return factor * v;
}

double log_binomial(double n, double k) {
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

double digamma(double x) { return boost::math::digamma(x, QuietPolicy()); }

double harmonic(double x) { return digamma(x + 1.0) + kEulerGamma; }

double upper_incomplete_gamma(double s, double x) {
  return boost::math::tgamma(s, x, QuietPolicy());
}

double expm1_minus_z(double z) {
  if (std::abs(z) < 0.5) {
    double term = z * z / 2.0;
    double sum = 0.0;
    for (int j = 3; j < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++j) {
      sum += term;
      term *= z / j;
    }
    return sum + term;
  }
  return std::expm1(z) - z;
}

double log1m_plus(double p) {
  if (p < 0.1) {
    // -(p^2/2 + p^3/3 + ...)
    double pk = p * p;
    double sum = 0.0;
    for (int m = 2; m < 60; ++m) {
      const double t = pk / m;
      sum += t;
      if (t < 1e-18 * sum) break;
      pk *= p;
    }
    return -sum;
  }
  return std::log1p(-p) + p;
}

double z_exp_minus_expm1(double z) {
  if (std::abs(z) < 0.5) {
    // sum_{j>=2} (j-1) z^j / j!
    double zj_over_fact = z * z / 2.0;
    double sum = 0.0;
    for (int j = 2; j < 40; ++j) {
      const double t = (j - 1) * zj_over_fact;
      sum += t;
      if (std::abs(t) < 1e-18 * std::abs(sum)) break;
      zj_over_fact *= z / (j + 1);
    }
    return sum;
  }
  return z * std::exp(z) - std::expm1(z);
}

}  // namespace lamcoal
