#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lamcoal/measure.hpp"

namespace lamcoal {

/// How a rate is evaluated. `automatic` uses closed forms for built-in parts
/// and falls back to quadrature; `quadrature` never uses closed forms for
/// continuous parts (atoms are always exact).
enum class Route { automatic, quadrature };

/// An integrand f on [0, 1] with f(p) = O(p^2) at 0, for ∫ f(p) Λ(dp) / p^2.
struct MuKernel {
  /// f(p).
  RealFn value;
  /// f(p) / p^2 evaluated stably; derived from `value` when empty.
  RealFn over_p2;
  /// f'(p), used for tail-represented parts; central differences when empty.
  RealFn derivative;
  /// lim_{p -> 0} f(p) / p^2; estimated by extrapolation when empty.
  std::optional<double> limit_at_zero;
  /// Characteristic argument used to place quadrature nodes.
  double scale = 1.0;
  /// Locations in (0, 1) where the integrand concentrates.
  std::vector<double> hints;
};

/// ∫_[0,1] f(p) Λ(dp)/p^2 with the atom at 0 contributing Λ({0}) lim f/p^2.
/// Throws InvalidInput when f does not decay like p^2 at 0.
double integrate_mu_kernel(const LambdaMeasure& measure, const MuKernel& kernel);

/// λ_{b,k}: rate at which a specified k-tuple out of b lineages merges.
double pairwise_rate(const LambdaMeasure& measure, int b, int k, Route route = Route::automatic);
/// log(C(b,k) λ_{b,k}); stays finite where λ_{b,k} alone would underflow.
double log_weighted_pairwise_rate(const LambdaMeasure& measure, int b, int k,
                                  Route route = Route::automatic);

/// λ(x), the total merger rate, for real x >= 2.
double total_rate(const LambdaMeasure& measure, double x, Route route = Route::automatic);
/// μ(x), the rate of decrease of the block count, for real x >= 2.
double decrease_rate(const LambdaMeasure& measure, double x, Route route = Route::automatic);
/// κ(x) = μ(x) / x.
double kappa(const LambdaMeasure& measure, double x, Route route = Route::automatic);
/// ν(x) = μ(x) / λ(x), the mean jump size of the block-counting chain.
double nu(const LambdaMeasure& measure, double x, Route route = Route::automatic);
/// ψ(x) = ∫ (e^{-xp} - 1 + xp) Λ(dp)/p^2.
double psi(const LambdaMeasure& measure, double x, Route route = Route::automatic);

/// Central difference (κ(x+h) - κ(x-h)) / 2h; default h = max(1e-3 x, 0.5).
double kappa_prime(const LambdaMeasure& measure, double x, std::optional<double> h = std::nullopt);
/// κ'(x) by direct integration of the differentiated kernel (closed forms where known).
double kappa_prime_exact(const LambdaMeasure& measure, double x, Route route = Route::automatic);

/// Distribution of the merger size k in {2..b} given b blocks; index k, entries 0 and 1 zero.
std::vector<double> merger_pmf(const LambdaMeasure& measure, int b, Route route = Route::automatic);

// ---------------------------------------------------------------------------
// Classification

enum class Tri { no, yes, unknown };
std::string to_string(Tri t);

/// Regular variation of the tail ∫_(y,1] p^-2 Λ(dp) ~ y^-alpha L(1/y).
struct RVProfile {
  double alpha = 1.0;
  RealFn L;
  /// True when supplied by a built-in family (closed-form L and L*).
  bool analytic = false;
  /// For analytic profiles: L(x) = scale * (log x)^log_power.
  double scale = 1.0;
  double log_power = 0.0;
};

struct Classification {
  Tri dust = Tri::unknown;
  /// Coming down from infinity.
  Tri cdi = Tri::unknown;
  std::optional<RVProfile> rv;
  /// False when produced by the numerical heuristic.
  bool analytic = false;
  /// Growth exponents d log κ / d log x and d log μ / d log x at the end of the
  /// heuristic grid; empty for analytic classifications.
  std::optional<double> kappa_slope;
  std::optional<double> mu_slope;
};

/// Dust / coming-down-from-infinity / regular-variation classification.
Classification classify(const LambdaMeasure& measure,
                        const std::optional<RVProfile>& rv_hint = std::nullopt);

/// L*(x) = ∫_1^x L(y)/y dy; only defined for alpha = 1 profiles.
double lstar(const RVProfile& profile, double x);

/// Regular-variation profile of the Beta(a, c) density (alpha = 2 - a).
RVProfile beta_rv_profile(const BetaDensity& b);

}  // namespace lamcoal
