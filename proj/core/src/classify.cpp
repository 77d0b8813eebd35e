#include <cmath>
#include <string>

#include "lamcoal/error.hpp"
#include "lamcoal/rates.hpp"

namespace lamcoal {
namespace {

struct PartInfo {
  Tri dust = Tri::unknown;
  Tri cdi = Tri::unknown;
  std::optional<RVProfile> rv;
  bool analytic = false;
};

RVProfile make_profile(double alpha, double scale, double log_power) {
  RVProfile p;
  p.alpha = alpha;
  p.analytic = true;
  p.scale = scale;
  p.log_power = log_power;
  p.L = [scale, log_power](double x) {
    return log_power == 0.0 ? scale : scale * std::pow(std::log(x), log_power);
  };
  return p;
}

PartInfo describe(const ContinuousPart& part) {
  PartInfo info;
  if (const auto* b = std::get_if<BetaDensity>(&part)) {
    info.analytic = true;
    info.dust = b->a > 1.0 ? Tri::yes : Tri::no;
    info.cdi = b->a < 1.0 ? Tri::yes : Tri::no;
    info.rv = beta_rv_profile(*b);
    return info;
  }
  if (const auto* t = std::get_if<LogFamilyTail>(&part)) {
    info.analytic = true;
    info.dust = Tri::no;
    info.cdi = t->chi > 0.0 ? Tri::yes : Tri::no;
    info.rv = make_profile(1.0, t->mass * log_family_constant(t->chi), t->chi);
    return info;
  }
  return info;
}

// Sum of regularly varying tails: the larger exponent wins; at equal exponents
// the larger log power wins, and equal powers add.
std::optional<RVProfile> combine(const std::optional<RVProfile>& a,
                                 const std::optional<RVProfile>& b) {
  if (!a || !b || !a->analytic || !b->analytic) return std::nullopt;
  if (a->alpha != b->alpha) return a->alpha > b->alpha ? a : b;
  if (a->log_power != b->log_power) return a->log_power > b->log_power ? a : b;
  return make_profile(a->alpha, a->scale + b->scale, a->log_power);
}

Tri combine_dust(Tri a, Tri b) {
  if (a == Tri::no || b == Tri::no) return Tri::no;
  if (a == Tri::yes && b == Tri::yes) return Tri::yes;
  return Tri::unknown;
}

void heuristic(const LambdaMeasure& m, Classification& c) {
  const double x1 = 1e5;
  const double x2 = 1e6;
  const double k1 = kappa(m, x1);
  const double k2 = kappa(m, x2);
  const double m1 = decrease_rate(m, x1);
  const double m2 = decrease_rate(m, x2);
  c.kappa_slope = std::log(k2 / k1) / std::log(x2 / x1);
  c.mu_slope = std::log(m2 / m1) / std::log(x2 / x1);
}

}  // namespace

RVProfile beta_rv_profile(const BetaDensity& b) {
  if (b.a < 2.0) return make_profile(2.0 - b.a, b.mass / ((2.0 - b.a) * beta_fn(b.a, b.c)), 0.0);
  // Tail integral of p^(a-3) near 0 stays bounded (a > 2) or grows like log(1/y) (a = 2).
  if (b.a == 2.0) return make_profile(0.0, b.mass / beta_fn(b.a, b.c), 1.0);
  return make_profile(0.0, b.mass * beta_fn(b.a - 2.0, b.c) / beta_fn(b.a, b.c), 0.0);
}

Classification classify(const LambdaMeasure& measure, const std::optional<RVProfile>& rv_hint) {
  Classification out;
  bool analytic = true;
  bool first = true;
  Tri dust = Tri::unknown;
  Tri cdi = Tri::no;
  bool any_cdi_unknown = false;
  std::optional<RVProfile> rv;

  auto absorb = [&](const PartInfo& info) {
    analytic = analytic && info.analytic;
    dust = first ? info.dust : combine_dust(dust, info.dust);
    if (info.cdi == Tri::yes) cdi = Tri::yes;
    if (info.cdi == Tri::unknown) any_cdi_unknown = true;
    rv = first ? info.rv : combine(rv, info.rv);
    first = false;
  };

  if (measure.atom_at_zero() > 0.0) {
    // The Kingman component alone forces CDI and no dust; it also breaks
    // regular variation of the tail (the atom is not seen by the tail).
    PartInfo k;
    k.analytic = true;
    k.dust = Tri::no;
    k.cdi = Tri::yes;
    absorb(k);
  }
  for (const auto& a : measure.atoms()) {
    PartInfo info;
    info.analytic = true;
    info.dust = Tri::yes;
    info.cdi = Tri::no;
    info.rv = make_profile(0.0, a.mass / (a.location * a.location), 0.0);
    absorb(info);
  }
  for (const auto& part : measure.parts()) absorb(describe(part));

  if (measure.atom_at_zero() > 0.0) rv.reset();
  // Several non-CDI components: ∫ dx/μ diverges for the sum only when each
  // component's μ grows at most like x log x, which the profiles decide.
  if (cdi == Tri::no && (any_cdi_unknown || !analytic)) cdi = Tri::unknown;
  if (cdi == Tri::no && rv && measure.parts().size() + measure.atoms().size() > 1) {
    const bool slow = rv->alpha < 1.0 || (rv->alpha == 1.0 && rv->log_power <= 0.0);
    cdi = slow ? Tri::no : Tri::unknown;
  }

  out.dust = dust;
  out.cdi = cdi;
  out.rv = rv;
  out.analytic = analytic;

  if (!analytic) {
    heuristic(measure, out);
    out.rv.reset();
  }
  if (rv_hint) {
    out.rv = rv_hint;
    // Exponent alone settles both questions away from alpha = 1.
    if (out.dust == Tri::unknown && rv_hint->alpha != 1.0) {
      out.dust = rv_hint->alpha > 1.0 ? Tri::no : Tri::yes;
    }
    if (out.cdi == Tri::unknown && rv_hint->alpha != 1.0) {
      out.cdi = rv_hint->alpha > 1.0 ? Tri::yes : Tri::no;
    }
  }
  return out;
}

double lstar(const RVProfile& profile, double x) {
  if (profile.alpha != 1.0) {
    throw InvalidInput("L* is defined only for regular variation with exponent 1; got alpha=" +
                       format_number(profile.alpha));
  }
  if (!(x >= 1.0)) throw InvalidInput("L* needs x >= 1");
  if (profile.analytic) {
    const double p = profile.log_power;
    if (!(p > -1.0)) throw InvalidInput("L* needs a log power above -1");
    return profile.scale * std::pow(std::log(x), p + 1.0) / (p + 1.0);
  }
  if (!profile.L) throw InvalidInput("regular-variation profile has no L");
  return integrate([&](double s) { return profile.L(std::exp(s)); }, 0.0, std::log(x));
}

}  // namespace lamcoal
