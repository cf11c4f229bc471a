#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "tmlab/radial.hpp"

namespace tmlab {

namespace potential {

struct Constant {
  double lambda = 0.0;
};
/// 1 / (4 r^2 log(1/r)^2)
struct Leray {};
/// 1 / (4 r^2 log(1/r)^2 max(log(1/r)^gamma, 1))
struct Gamma {
  double gamma = 1.0;
};
/// 1 / (1 - r^2)^2
struct WangYe {};
/// Linear interpolation in log r, constant outside the table.
struct Tabulated {
  std::vector<double> radii;
  std::vector<double> values;
  std::string source;
};

}  // namespace potential

/// Radial potential V on the unit disk.
class PotentialSpec {
 public:
  using Kind = std::variant<potential::Constant, potential::Leray, potential::Gamma,
                            potential::WangYe, potential::Tabulated>;

  PotentialSpec() : kind_(potential::Constant{0.0}) {}
  static PotentialSpec constant(double lambda);
  static PotentialSpec leray();
  static PotentialSpec gamma(double gamma);
  static PotentialSpec wangye();
  static PotentialSpec tabulated(std::vector<double> radii, std::vector<double> values,
                                 std::string source = "inline");
  /// `constant:<l>`, `leray`, `gamma:<g>`, `wangye`, `tabulated:<path.csv>`.
  static PotentialSpec parse(const std::string& text);

  const Kind& kind() const noexcept { return kind_; }
  std::string describe() const;
  bool is_zero() const noexcept;

  /// V(r) for r in (0, 1).
  double eval(double r) const;
  /// V at r where x = 1 - r is supplied separately, for accuracy near r = 1.
  double at(double r, double x) const;
  double operator()(double r) const { return eval(r); }

 private:
  explicit PotentialSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

struct ClassVCheck {
  bool member = true;
  /// First offending pair (nodes[index], nodes[index + 1]) when not a member.
  std::size_t index = 0;
  double r_left = 0.0;
  double r_right = 0.0;
  double g_left = 0.0;
  double g_right = 0.0;
};

/// Checks that g(r) = (1 - r^2)^2 V(r) is nonincreasing over the interior nodes.
ClassVCheck check_class_V(const PotentialSpec& spec, const RadialGrid& grid, double slack = 1e-12);

struct KatoCheck {
  bool satisfied = false;
  std::vector<double> radii;  ///< 10^-2 ... 10^-12
  std::vector<double> h;      ///< r^2 log(1/r)^(2+alpha) V(r)
  /// Least-squares decay exponent of h against log(1/r) over the last five samples.
  double decay_exponent = 0.0;
};

/// Numeric test of r^2 log(1/r)^(2+alpha) V(r) -> 0 along r = 10^-m, m = 2..12.
/// Satisfied when the last five samples are nonincreasing and either the last one
/// is below 1e-6 or the fitted decay exponent is at least 0.05.
KatoCheck check_kato(const PotentialSpec& spec, double alpha);

/// Radial potential of a disk of radius R moved to the unit disk, with
/// (1 - r^2)^2 V replaced by its decreasing rearrangement for the hyperbolic measure.
/// Table radii are physical radii in (0, R]; the unit-disk potential is R^2 V(R r).
PotentialSpec rearranged_potential(const potential::Tabulated& table, double R);

}  // namespace tmlab
