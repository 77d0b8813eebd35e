#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <span>
#include <vector>

namespace lamcoal {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  void add(double v) noexcept {
    const double t = sum_ + v;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (v >= 0 ? v : -v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

using RealFn = std::function<double(double)>;

/// Compact rendering of a number for error messages (%.10g).
std::string format_number(double v);

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  /// Upper bound on the number of Gauss-Kronrod panels.
  unsigned max_panels = 4000;
};

/// Globally adaptive Gauss-Kronrod (61 point) over [a, b]; b may be +infinity.
/// Panels with the largest error estimate are bisected until the total error
/// is below max(rel_tol |I|, abs_tol) or below the round-off floor of the L1
/// norm. Throws NumericalError on a non-finite result or when the panel budget
/// runs out with an error above 1e-6 of the L1 norm.
double integrate(const RealFn& f, double a, double b, const QuadratureOptions& opts = {});

/// Same, starting from the panels of a sorted breakpoint list.
double integrate_pieces(const RealFn& f, std::span<const double> breakpoints,
                        const QuadratureOptions& opts = {});

/// Computes the integral of h over (0, 1] through the substitution p = exp(-u),
/// which resolves the p -> 0 end on a logarithmic scale. `scale` is the
/// characteristic argument (x or b) of the kernel; nodes are concentrated
/// around p ~ 1/scale and around every p in `hints`.
double integrate_unit_interval(const RealFn& h, double scale, std::span<const double> hints = {},
                               const QuadratureOptions& opts = {});

/// Sorted breakpoints in u = -log p used by integrate_unit_interval.
std::vector<double> unit_interval_breakpoints(double scale, std::span<const double> hints);

// Special functions (log-space where overflow is possible).
double log_gamma(double x);
/// log |B(a, b)| and the sign of B(a, b); valid for non-integer negative arguments.
double log_abs_beta(double a, double b, int* sign);
/// B(a, b) by analytic continuation (a + b > 0 or any non-pole argument).
double beta_fn(double a, double b);
double log_binomial(double n, double k);
double digamma(double x);
/// Generalized harmonic number H_x = digamma(x + 1) + Euler gamma.
double harmonic(double x);
/// Upper incomplete gamma function Gamma(s, x).
double upper_incomplete_gamma(double s, double x);

// Stable building blocks for kernels with O(p^2) behaviour at p -> 0.
/// exp(z) - 1 - z.
double expm1_minus_z(double z);
/// log(1 - p) + p, for p in [0, 1).
double log1m_plus(double p);
/// sum_{j>=2} (j - 1) z^j / j!  ==  z exp(z) - expm1(z).
double z_exp_minus_expm1(double z);

}  // namespace lamcoal
