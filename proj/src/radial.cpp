#include "tmlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

double logit(double r) { return std::log(r) - std::log1p(-r); }

}  // namespace

RadialGrid::RadialGrid(std::vector<double> nodes, Grading grading)
    : nodes_(std::move(nodes)), grading_(grading) {
  if (nodes_.size() < 2) throw InvalidInput("radial grid needs at least 2 nodes");
  if (!(nodes_.front() > 0.0)) throw InvalidInput("radial grid: nodes[0] must be positive");
  if (nodes_.back() != 1.0) throw InvalidInput("radial grid: last node must be 1");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i] < nodes_[i + 1])) throw InvalidInput("radial grid: nodes must be strictly increasing");
  }
  grading_.inner = nodes_.front();
  grading_.outer = 1.0 - nodes_[nodes_.size() - 2];
}

GridPtr RadialGrid::graded(std::size_t n, double eps) {
  if (n < 3) throw InvalidInput("graded grid needs at least 3 nodes");
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidInput("graded grid: eps must lie in (0, 0.5)");
  const double z0 = logit(eps);
  const double z1 = -z0;
  const std::size_t m = n - 1;
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < m; ++i) {
    const double z = z0 + (z1 - z0) * static_cast<double>(i) / static_cast<double>(m - 1);
    nodes[i] = 1.0 / (1.0 + std::exp(-z));
  }
  nodes[m - 1] = 1.0 - eps;
  nodes[m] = 1.0;
  return GridPtr(new RadialGrid(std::move(nodes), Grading{Grading::Kind::logit, 0, 0}));
}

GridPtr RadialGrid::uniform(std::size_t n) {
  if (n < 2) throw InvalidInput("uniform grid needs at least 2 nodes");
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  nodes[n - 1] = 1.0;
  return GridPtr(new RadialGrid(std::move(nodes), Grading{Grading::Kind::uniform, 0, 0}));
}

GridPtr RadialGrid::from_nodes(std::vector<double> nodes) {
  return GridPtr(new RadialGrid(std::move(nodes), Grading{Grading::Kind::custom, 0, 0}));
}

std::size_t RadialGrid::locate(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  if (it == nodes_.begin()) return 0;
  const auto i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(i, cells() - 1);
}

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values, bool dirichlet)
    : grid_(std::move(grid)), values_(std::move(values)), dirichlet_(dirichlet) {
  if (!grid_) throw InvalidInput("radial function without grid");
  if (values_.size() != grid_->size()) throw InvalidInput("radial function: value count does not match grid");
  if (dirichlet_) values_.back() = 0.0;
}

RadialFunction RadialFunction::sample(GridPtr grid, const std::function<double(double)>& f,
                                      bool dirichlet) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f((*grid)[i]);
  return RadialFunction(std::move(grid), std::move(v), dirichlet);
}

RadialFunction RadialFunction::zero(GridPtr grid) {
  const std::size_t n = grid->size();
  return RadialFunction(std::move(grid), std::vector<double>(n, 0.0), true);
}

double RadialFunction::at(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("radial function evaluated outside [0, 1]");
  const auto& x = grid_->nodes();
  if (r <= x.front()) return values_.front();
  const std::size_t i = grid_->locate(r);
  const double t = (r - x[i]) / (x[i + 1] - x[i]);
  return on_cell(i, std::clamp(t, 0.0, 1.0));
}

RadialFunction RadialFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return RadialFunction(grid_, std::move(v), dirichlet_);
}

RadialFunction RadialFunction::abs() const {
  std::vector<double> v(values_);
  for (double& x : v) x = std::fabs(x);
  return RadialFunction(grid_, std::move(v), dirichlet_);
}

RadialFunction RadialFunction::resample(GridPtr grid) const {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = at((*grid)[i]);
  return RadialFunction(std::move(grid), std::move(v), dirichlet_);
}

RadialFunction RadialFunction::with_values(std::vector<double> values) const {
  return RadialFunction(grid_, std::move(values), dirichlet_);
}

double gradient_norm_sq(const RadialFunction& u, Exec exec) {
  const auto& r = u.grid().nodes();
  const auto& v = u.values();
  const double s = kernels::ordered_sum(
      u.grid().cells(),
      [&](std::size_t i) {
        const double h = r[i + 1] - r[i];
        const double d = v[i + 1] - v[i];
        return d * d / h * (0.5 * (r[i] + r[i + 1]));
      },
      exec);
  return 2.0 * std::numbers::pi * s;
}

double lp_norm(const RadialFunction& u, double p, Exec exec) {
  if (!(p >= 1.0)) throw InvalidInput("lp_norm requires p >= 1");
  double m = 0.0;
  for (double x : u.values()) m = std::max(m, std::fabs(x));
  if (m == 0.0) return 0.0;
  // Factor out the maximum so large p cannot overflow.
  const double integral = integrate_gauss(
      u, [&](double x) { return std::pow(std::fabs(x) / m, p); }, exec);
  return m * std::pow(integral, 1.0 / p);
}

double integral_weighted(const RadialFunction& u, const std::function<double(double)>& w, Exec exec) {
  const auto& r = u.grid().nodes();
  const auto& v = u.values();
  const double s = kernels::ordered_sum(
      u.grid().cells(),
      [&](std::size_t i) {
        const double rm = 0.5 * (r[i] + r[i + 1]);
        const double wm = w(rm);
        if (!std::isfinite(wm)) throw SingularEvaluation("weight is not finite", rm);
        const double um = 0.5 * (v[i] + v[i + 1]);
        return wm * um * um * rm * (r[i + 1] - r[i]);
      },
      exec);
  return 2.0 * std::numbers::pi * s;
}

std::vector<double> derivative(const RadialFunction& u) {
  const auto& r = u.grid().nodes();
  const auto& v = u.values();
  std::vector<double> d(u.grid().cells());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
  return d;
}

void write_csv(std::ostream& out, const RadialFunction& u) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(17);
  out << "r,value\n";
  for (std::size_t i = 0; i < u.size(); ++i) out << u.grid()[i] << ',' << u[i] << '\n';
  out.flags(flags);
  out.precision(prec);
}

CsvColumns read_csv_columns(std::istream& in) {
  CsvColumns cols;
  auto& r = cols.r;
  auto& v = cols.value;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidInput("csv line " + std::to_string(lineno) + ": expected r,value");
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    if (r.empty() && a == "r") continue;
    try {
      std::size_t pa = 0;
      std::size_t pb = 0;
      const double x = std::stod(a, &pa);
      const double y = std::stod(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing");
      if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("nonfinite");
      r.push_back(x);
      v.push_back(y);
    } catch (const std::exception&) {
      throw InvalidInput("csv line " + std::to_string(lineno) + ": not a pair of finite numbers");
    }
  }
  return cols;
}

RadialFunction read_csv(std::istream& in) {
  auto cols = read_csv_columns(in);
  auto& r = cols.r;
  auto& v = cols.value;
  const bool dirichlet = !r.empty() && r.back() == 1.0 && v.back() == 0.0;
  auto grid = RadialGrid::from_nodes(std::move(r));
  return RadialFunction(std::move(grid), std::move(v), dirichlet);
}

CsvColumns read_csv_columns_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_csv_columns(in);
}

RadialFunction read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_csv(in);
}

}  // namespace tmlab
