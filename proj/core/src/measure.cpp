#include "lamcoal/measure.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "lamcoal/error.hpp"

namespace lamcoal {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double beta_pdf(const BetaDensity& b, double p) {
  if (p <= 0.0 || p > 1.0) return 0.0;
  if (p == 1.0) {
    if (b.c == 1.0) return b.mass / beta_fn(b.a, b.c);
    return b.c < 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  int sign = 1;
  const double lb = log_abs_beta(b.a, b.c, &sign);
  return b.mass * std::exp((b.a - 1.0) * std::log(p) + (b.c - 1.0) * std::log1p(-p) - lb);
}

double log_family_tail(const LogFamilyTail& t, double y) {
  if (y >= 1.0) return 0.0;
  if (y <= 0.0) return std::numeric_limits<double>::infinity();
  const double k = log_family_constant(t.chi);
  const double lg = 1.0 - std::log(y);
  // y^-1 lg^chi - 1, written to stay accurate as y -> 1.
  const double v = std::expm1(t.chi * std::log(lg) - std::log(y));
  return t.mass * k * v;
}

}  // namespace

double log_family_constant(double chi) {
  return 1.0 / (2.0 * std::numbers::e * upper_incomplete_gamma(chi + 1.0, 1.0) - 1.0);
}

bool is_tail_represented(const ContinuousPart& part) {
  return std::holds_alternative<LogFamilyTail>(part) || std::holds_alternative<TailPart>(part);
}

double part_density(const ContinuousPart& part, double p) {
  return std::visit(
      Overloaded{
          [p](const BetaDensity& b) { return beta_pdf(b, p); },
          [p](const DensityPart& d) { return d.density(p); },
          [](const auto&) -> double {
            throw InvalidInput("density requested for a tail-represented continuous part");
          },
      },
      part);
}

double part_tail(const ContinuousPart& part, double y) {
  return std::visit(
      Overloaded{
          [y](const LogFamilyTail& t) { return log_family_tail(t, y); },
          [y](const TailPart& t) { return t.tail(y); },
          [](const auto&) -> double {
            throw InvalidInput("tail requested for a density-represented continuous part");
          },
      },
      part);
}

double part_mass(const ContinuousPart& part) {
  return std::visit(
      Overloaded{
          [](const BetaDensity& b) { return b.mass; },
          [](const LogFamilyTail& t) { return t.mass; },
          [](const DensityPart& d) {
            return integrate_unit_interval([&d](double p) { return d.density(p); }, 1.0);
          },
          [](const TailPart& t) {
            return integrate_unit_interval([&t](double y) { return 2.0 * y * t.tail(y); }, 1.0);
          },
      },
      part);
}

LambdaMeasure::LambdaMeasure(double atom_at_zero, std::vector<PointAtom> atoms,
                             std::vector<ContinuousPart> parts, std::string label)
    : atom_at_zero_(atom_at_zero),
      atoms_(std::move(atoms)),
      parts_(std::move(parts)),
      label_(std::move(label)) {
  if (!(atom_at_zero_ >= 0.0) || !std::isfinite(atom_at_zero_)) {
    throw InvalidInput("atom at zero must be a finite nonnegative mass");
  }
  for (const auto& a : atoms_) {
    if (!(a.location > 0.0 && a.location <= 1.0)) {
      throw InvalidInput("atom locations must lie in (0, 1]; got " + format_number(a.location));
    }
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw InvalidInput("atom masses must be positive");
    }
  }
  for (const auto& part : parts_) {
    if (const auto* b = std::get_if<BetaDensity>(&part)) {
      if (!(b->a > 0.0 && b->c > 0.0 && b->mass > 0.0)) {
        throw InvalidInput("Beta part needs a > 0, c > 0 and positive mass");
      }
    }
    if (const auto* t = std::get_if<LogFamilyTail>(&part)) {
      if (!(t->chi > -1.0) || !(t->mass > 0.0)) {
        throw InvalidInput("log-family part needs chi > -1 and positive mass");
      }
    }
  }
  CompensatedSum mass(atom_at_zero_);
  for (const auto& a : atoms_) mass += a.mass;
  for (const auto& part : parts_) mass += part_mass(part);
  total_mass_ = mass.value();
  if (!(total_mass_ > 0.0) || !std::isfinite(total_mass_)) {
    throw InvalidInput("Λ must be a finite, non-vanishing measure (total mass " +
                       format_number(total_mass_) + ")");
  }
}

LambdaMeasure LambdaMeasure::kingman(double mass) {
  if (!(mass > 0.0)) throw InvalidInput("kingman mass must be positive");
  std::ostringstream os;
  os << "kingman:" << mass;
  return LambdaMeasure(mass, {}, {}, mass == 1.0 ? "kingman" : os.str());
}

LambdaMeasure LambdaMeasure::bolthausen_sznitman() {
  return LambdaMeasure(0.0, {}, {BetaDensity{1.0, 1.0, 1.0}}, "bs");
}

LambdaMeasure LambdaMeasure::beta(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw InvalidInput("beta:alpha requires alpha in the open interval (1, 2); got " +
                       format_number(alpha));
  }
  std::ostringstream os;
  os << "beta:" << alpha;
  return LambdaMeasure(0.0, {}, {BetaDensity{2.0 - alpha, alpha, 1.0}}, os.str());
}

LambdaMeasure LambdaMeasure::beta2(double a, double c) {
  if (!(a > 0.0 && c > 0.0)) {
    throw InvalidInput("beta2:a,c requires a > 0 and c > 0");
  }
  std::ostringstream os;
  os << "beta2:" << a << "," << c;
  return LambdaMeasure(0.0, {}, {BetaDensity{a, c, 1.0}}, os.str());
}

LambdaMeasure LambdaMeasure::log_family(double chi) {
  if (!(chi > -1.0)) {
    throw InvalidInput("logfam:chi requires chi > -1; got " + format_number(chi));
  }
  std::ostringstream os;
  os << "logfam:" << chi;
  return LambdaMeasure(0.0, {}, {LogFamilyTail{chi, 1.0}}, os.str());
}

LambdaMeasure LambdaMeasure::point(double location, double mass) {
  std::ostringstream os;
  os << "atom:" << location << "," << mass;
  if (location == 0.0) return LambdaMeasure(mass, {}, {}, os.str());
  return LambdaMeasure(0.0, {PointAtom{location, mass}}, {}, os.str());
}

LambdaMeasure LambdaMeasure::tabulated(std::vector<double> p, std::vector<double> g,
                                       std::string label) {
  if (p.size() != g.size() || p.empty()) {
    throw InvalidInput("tabulated density needs matching, nonempty p and density columns");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) throw InvalidInput("tabulated p values must lie in [0, 1]");
    if (!(g[i] >= 0.0) || !std::isfinite(g[i])) {
      throw InvalidInput("tabulated density values must be finite and nonnegative");
    }
    if (i > 0 && !(p[i] > p[i - 1])) throw InvalidInput("tabulated p values must increase");
  }
  auto xs = std::make_shared<const std::vector<double>>(std::move(p));
  auto ys = std::make_shared<const std::vector<double>>(std::move(g));
  RealFn density = [xs, ys](double q) {
    const auto& x = *xs;
    const auto& y = *ys;
    if (q <= x.front()) return y.front();
    if (q >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), q);
    const auto i = static_cast<std::size_t>(it - x.begin());
    const double t = (q - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
  };
  return LambdaMeasure(0.0, {}, {DensityPart{std::move(density), label}}, label);
}

LambdaMeasure operator+(const LambdaMeasure& lhs, const LambdaMeasure& rhs) {
  auto atoms = lhs.atoms_;
  atoms.insert(atoms.end(), rhs.atoms_.begin(), rhs.atoms_.end());
  auto parts = lhs.parts_;
  parts.insert(parts.end(), rhs.parts_.begin(), rhs.parts_.end());
  return LambdaMeasure(lhs.atom_at_zero_ + rhs.atom_at_zero_, std::move(atoms), std::move(parts),
                       "mix:" + lhs.label_ + "+" + rhs.label_);
}

bool LambdaMeasure::is_pure_kingman() const noexcept {
  return atom_at_zero_ > 0.0 && atoms_.empty() && parts_.empty();
}

std::optional<BetaDensity> LambdaMeasure::as_pure_beta() const noexcept {
  if (atom_at_zero_ != 0.0 || !atoms_.empty() || parts_.size() != 1) return std::nullopt;
  if (const auto* b = std::get_if<BetaDensity>(&parts_.front())) return *b;
  return std::nullopt;
}

void LambdaMeasure::validate() const {
  for (const auto& part : parts_) {
    if (is_tail_represented(part)) {
      const double t1 = part_tail(part, 1.0);
      const double thalf = part_tail(part, 0.5);
      if (std::abs(t1) > 1e-12 * std::max(1.0, std::abs(thalf))) {
        throw InvalidInput("tail function must vanish at y = 1; list an atom at 1 explicitly");
      }
      double prev = t1;
      for (int j = 1; j <= 200; ++j) {
        const double y = std::pow(10.0, -12.0 * j / 200.0);
        const double t = part_tail(part, y);
        if (!(t >= prev * (1.0 - 1e-12) - 1e-300)) {
          throw InvalidInput("tail function must be nonincreasing (violated near y = " +
                             format_number(y) + ")");
        }
        prev = t;
      }
    } else {
      for (int j = 0; j <= 200; ++j) {
        const double p = std::pow(10.0, -12.0 * j / 200.0);
        const double g = part_density(part, p);
        if (!(g >= 0.0)) throw InvalidInput("density must be nonnegative");
      }
    }
  }
  // Mass consistency: closed-form masses against quadrature of the representation.
  for (const auto& part : parts_) {
    const double declared = part_mass(part);
    double numeric = 0.0;
    if (is_tail_represented(part)) {
      numeric = integrate_unit_interval([&part](double y) { return 2.0 * y * part_tail(part, y); },
                                        1.0);
    } else {
      numeric = integrate_unit_interval([&part](double p) { return part_density(part, p); }, 1.0);
    }
    if (std::abs(numeric - declared) > 1e-8 * std::max(1.0, declared)) {
      throw NumericalError("continuous part mass mismatch: declared " + format_number(declared) +
                           ", quadrature " + format_number(numeric));
    }
  }
}

}  // namespace lamcoal
