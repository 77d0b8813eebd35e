#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lamcoal/numerics.hpp"

namespace lamcoal {

/// Atom of Λ at a location p in (0, 1].
struct PointAtom {
  double location;
  double mass;
};

/// `mass` times the Beta(a, c) probability density on (0, 1).
/// Beta(1, 1) is the Bolthausen-Sznitman coalescent; Beta(2 - alpha, alpha)
/// the usual Beta-coalescent family.
struct BetaDensity {
  double a;
  double c;
  double mass = 1.0;
};

/// Continuous part defined through its tail
///   T(y) = mass * k_chi * (y^-1 (1 - log y)^chi - 1),   0 < y <= 1,
/// normalised so that the part has total mass `mass`. chi = 0 reproduces the
/// Bolthausen-Sznitman measure exactly.
struct LogFamilyTail {
  double chi;
  double mass = 1.0;
};

/// User-supplied density g on (0, 1], e.g. a tabulated one.
struct DensityPart {
  RealFn density;
  std::string label;
};

/// User-supplied tail T_c(y) = ∫_(y,1] p^-2 Λ_c(dp); nonincreasing with T_c(1) = 0.
struct TailPart {
  RealFn tail;
  std::string label;
};

using ContinuousPart = std::variant<BetaDensity, LogFamilyTail, DensityPart, TailPart>;

bool is_tail_represented(const ContinuousPart& part);
/// Density of a density-represented part (throws for tail-represented parts).
double part_density(const ContinuousPart& part, double p);
/// Tail function of a tail-represented part (throws for density-represented parts).
double part_tail(const ContinuousPart& part, double y);
/// Λ-mass of the part; closed form for built-ins, quadrature otherwise.
double part_mass(const ContinuousPart& part);

/// Normalising constant k_chi of LogFamilyTail.
double log_family_constant(double chi);

/// A finite, non-vanishing measure Λ on [0, 1].
class LambdaMeasure {
 public:
  LambdaMeasure() = default;
  LambdaMeasure(double atom_at_zero, std::vector<PointAtom> atoms,
                std::vector<ContinuousPart> parts, std::string label);

  static LambdaMeasure kingman(double mass = 1.0);
  static LambdaMeasure bolthausen_sznitman();
  /// Beta(2 - alpha, alpha), total mass 1; requires 1 < alpha < 2.
  static LambdaMeasure beta(double alpha);
  /// Beta(a, c), total mass 1.
  static LambdaMeasure beta2(double a, double c);
  static LambdaMeasure log_family(double chi);
  static LambdaMeasure point(double location, double mass);
  /// Piecewise-linear density through (p_i, g_i), constant beyond the end points.
  static LambdaMeasure tabulated(std::vector<double> p, std::vector<double> g, std::string label);

  /// Sum of two measures.
  friend LambdaMeasure operator+(const LambdaMeasure& lhs, const LambdaMeasure& rhs);

  double atom_at_zero() const noexcept { return atom_at_zero_; }
  const std::vector<PointAtom>& atoms() const noexcept { return atoms_; }
  const std::vector<ContinuousPart>& parts() const noexcept { return parts_; }
  double total_mass() const noexcept { return total_mass_; }
  const std::string& label() const noexcept { return label_; }

  /// True when Λ is exactly a multiple of δ_0.
  bool is_pure_kingman() const noexcept;
  /// The single Beta part when Λ is exactly one Beta density (no atoms).
  std::optional<BetaDensity> as_pure_beta() const noexcept;

  /// Re-checks the invariants (tail monotonicity, T(1) = 0, mass by quadrature).
  void validate() const;

 private:
  double atom_at_zero_ = 0.0;
  std::vector<PointAtom> atoms_;
  std::vector<ContinuousPart> parts_;
  double total_mass_ = 0.0;
  std::string label_;
};

}  // namespace lamcoal
