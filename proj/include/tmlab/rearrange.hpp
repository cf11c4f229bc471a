#pragma once

#include <cstddef>
#include <functional>

#include "tmlab/radial.hpp"

namespace tmlab {

/// Radial measure on the unit disk: hyperbolic 4 dx / (1 - r^2)^2 or Euclidean dx.
class MeasureProfile {
 public:
  enum class Kind { hyperbolic, euclidean };

  static MeasureProfile hyperbolic() { return MeasureProfile(Kind::hyperbolic); }
  static MeasureProfile euclidean() { return MeasureProfile(Kind::euclidean); }

  Kind kind() const noexcept { return kind_; }
  /// Density per unit dr at r, with x = 1 - r.
  double density(double r, double x) const noexcept;
  double density(double r) const noexcept { return density(r, 1.0 - r); }
  /// M(r), the measure of the disk of radius r.
  double mass(double r) const noexcept;
  /// M(b) - M(a) without cancellation.
  double mass_between(double a, double b) const noexcept;
  /// Inverse of M; masses at or beyond the total map to 1.
  double radius(double m) const noexcept;
  double total() const noexcept;

 private:
  explicit MeasureProfile(Kind k) : kind_(k) {}
  Kind kind_;
};

/// mu{f > t}.
double distribution(const RadialFunction& f, double t, const MeasureProfile& mu,
                    Exec exec = Exec::parallel);

/// Nonincreasing rearrangement of f >= 0. The result lives on the input nodes
/// together with the radii where f^# reaches a nodal value of f, so a
/// nonincreasing input is returned unchanged.
RadialFunction rearrange_decreasing(const RadialFunction& f,
                                    const MeasureProfile& mu = MeasureProfile::hyperbolic());

/// Largest relative gap |mu{f>t} - mu{g>t}| / max(1, mu{f>t}, mu{g>t}) over
/// `levels` midpoint levels of the joint value range.
double check_equimeasurable(const RadialFunction& f, const RadialFunction& g,
                            const MeasureProfile& mu, std::size_t levels = 2048);

/// Integral of F(f) dmu.
double integral_mu(const RadialFunction& f, const std::function<double(double)>& F,
                   const MeasureProfile& mu, Exec exec = Exec::parallel);

/// Integral of f g dmu; the two functions may live on different grids.
double integral_mu_product(const RadialFunction& f, const RadialFunction& g,
                           const MeasureProfile& mu, Exec exec = Exec::parallel);

/// Grid holding the nodes of both inputs.
GridPtr merge_grids(const RadialGrid& a, const RadialGrid& b);

/// int f^# g^# dmu - int f g dmu.
double hardy_littlewood_gap(const RadialFunction& f, const RadialFunction& g,
                            const MeasureProfile& mu = MeasureProfile::hyperbolic());

/// Dirichlet energy of f minus that of its hyperbolic rearrangement.
double polya_szego_gap(const RadialFunction& f);

}  // namespace tmlab
