#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tmlab/kernels.hpp"

namespace tmlab {

using kernels::Exec;

/// How the nodes of a grid were produced.
struct Grading {
  enum class Kind { logit, uniform, custom };
  Kind kind = Kind::custom;
  double inner = 0.0;  ///< nodes[0]
  double outer = 0.0;  ///< 1 - nodes[n-2]
};

class RadialGrid;
using GridPtr = std::shared_ptr<const RadialGrid>;

/// Strictly increasing radii in (0, 1] ending at 1.
class RadialGrid {
 public:
  static constexpr std::size_t kDefaultSize = 4096;
  static constexpr double kDefaultEps = 1e-8;

  /// Nodes uniform in z = logit(r) between logit(eps) and logit(1 - eps), then r = 1.
  /// Ratios near 0 and gaps 1 - r near 1 are both geometric.
  static GridPtr graded(std::size_t n = kDefaultSize, double eps = kDefaultEps);
  /// Nodes r_i = (i + 1) / n.
  static GridPtr uniform(std::size_t n);
  /// Validates and wraps arbitrary nodes.
  static GridPtr from_nodes(std::vector<double> nodes);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t cells() const noexcept { return nodes_.size() - 1; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }
  double inner() const noexcept { return nodes_.front(); }
  const Grading& grading() const noexcept { return grading_; }

  /// Index i of the cell [nodes[i], nodes[i+1]] containing r, clamped to valid cells.
  std::size_t locate(double r) const;

  bool same_nodes(const RadialGrid& other) const noexcept { return nodes_ == other.nodes_; }

 private:
  RadialGrid(std::vector<double> nodes, Grading grading);
  std::vector<double> nodes_;
  Grading grading_;
};

/// Piecewise-linear profile on a grid, constant left of nodes[0].
class RadialFunction {
 public:
  RadialFunction(GridPtr grid, std::vector<double> values, bool dirichlet);
  /// Samples f at the nodes; a Dirichlet function gets value 0 at r = 1.
  static RadialFunction sample(GridPtr grid, const std::function<double(double)>& f, bool dirichlet);
  static RadialFunction zero(GridPtr grid);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  bool dirichlet() const noexcept { return dirichlet_; }

  /// Linear interpolation; r in [0, 1].
  double at(double r) const;
  /// Value on cell i at local coordinate t in [0, 1].
  double on_cell(std::size_t i, double t) const noexcept {
    return values_[i] + t * (values_[i + 1] - values_[i]);
  }

  RadialFunction scaled(double c) const;
  RadialFunction abs() const;
  /// Interpolates onto another grid.
  RadialFunction resample(GridPtr grid) const;
  /// Same grid, new values (Dirichlet flag kept).
  RadialFunction with_values(std::vector<double> values) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  bool dirichlet_;
};

namespace quad {

/// Two-point Gauss-Legendre abscissae and weights on [0, 1].
inline constexpr double kGaussT[2] = {0.21132486540518711775, 0.78867513459481288225};
inline constexpr double kGaussW[2] = {0.5, 0.5};

}  // namespace quad

/// 2*pi * integral of f(u(r)) r dr over the disk. The core [0, nodes[0]] uses the
/// constant extension; each cell uses two-point Gauss on the interpolant.
template <class F>
double integrate_gauss(const RadialFunction& u, F&& f, Exec exec = Exec::parallel) {
  const auto& r = u.grid().nodes();
  const double cells = kernels::ordered_sum(
      u.grid().cells(),
      [&](std::size_t i) {
        const double a = r[i];
        const double h = r[i + 1] - a;
        double s = 0.0;
        for (int g = 0; g < 2; ++g) {
          const double t = quad::kGaussT[g];
          s += quad::kGaussW[g] * f(u.on_cell(i, t)) * (a + t * h);
        }
        return s * h;
      },
      exec);
  const double core = 0.5 * r[0] * r[0] * f(u[0]);
  return 2.0 * 3.14159265358979323846 * (core + cells);
}

/// As above for an integrand of two functions on the same grid.
template <class F>
double integrate_gauss(const RadialFunction& u, const RadialFunction& v, F&& f,
                       Exec exec = Exec::parallel) {
  const auto& r = u.grid().nodes();
  const double cells = kernels::ordered_sum(
      u.grid().cells(),
      [&](std::size_t i) {
        const double a = r[i];
        const double h = r[i + 1] - a;
        double s = 0.0;
        for (int g = 0; g < 2; ++g) {
          const double t = quad::kGaussT[g];
          s += quad::kGaussW[g] * f(u.on_cell(i, t), v.on_cell(i, t)) * (a + t * h);
        }
        return s * h;
      },
      exec);
  const double core = 0.5 * r[0] * r[0] * f(u[0], v[0]);
  return 2.0 * 3.14159265358979323846 * (core + cells);
}

/// 2*pi * sum over cells of (du/dr)^2 * r_mid * dr.
double gradient_norm_sq(const RadialFunction& u, Exec exec = Exec::parallel);

/// (2*pi * integral |u|^p r dr)^(1/p); p >= 1.
double lp_norm(const RadialFunction& u, double p, Exec exec = Exec::parallel);

/// 2*pi * sum over cells of w(r_mid) u(r_mid)^2 r_mid dr. Never samples r = 0 or r = 1.
double integral_weighted(const RadialFunction& u, const std::function<double(double)>& w,
                         Exec exec = Exec::parallel);

/// Per-cell slopes du/dr.
std::vector<double> derivative(const RadialFunction& u);

/// CSV with header `r,value`, 17 significant digits.
void write_csv(std::ostream& out, const RadialFunction& u);
struct CsvColumns {
  std::vector<double> r;
  std::vector<double> value;
};
/// Reads two numeric columns, skipping `#` comments and an `r,...` header.
CsvColumns read_csv_columns(std::istream& in);
CsvColumns read_csv_columns_file(const std::string& path);

/// Reads `r,value` rows, skipping `#` comments and the header. The function is
/// marked Dirichlet when the last node is r = 1 with value 0.
RadialFunction read_csv(std::istream& in);
RadialFunction read_csv_file(const std::string& path);

}  // namespace tmlab
