#include "tmlab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tmlab/errors.hpp"
#include "tmlab/rearrange.hpp"

namespace tmlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("invalid " + what + ": '" + s + "'");
  }
}

// log(1/r), accurate near r = 1 when x = 1 - r is known.
double log_inv(double r, double x) { return x < 0.5 ? -std::log1p(-x) : -std::log(r); }

void validate_table(const std::vector<double>& radii, const std::vector<double>& values) {
  if (radii.empty() || radii.size() != values.size())
    throw InvalidInput("tabulated potential needs matching, nonempty radius and value columns");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw InvalidInput("tabulated potential: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidInput("tabulated potential: radii must increase");
    if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
      throw InvalidInput("tabulated potential: values must be finite and nonnegative");
  }
}

double table_eval(const potential::Tabulated& t, double r) {
  const auto& x = t.radii;
  if (r <= x.front()) return t.values.front();
  if (r >= x.back()) return t.values.back();
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), r) - x.begin()) - 1;
  const double la = std::log(x[i]);
  const double lb = std::log(x[i + 1]);
  const double s = (std::log(r) - la) / (lb - la);
  return t.values[i] + s * (t.values[i + 1] - t.values[i]);
}

}  // namespace

PotentialSpec PotentialSpec::constant(double lambda) {
  if (!std::isfinite(lambda)) throw InvalidInput("constant potential must be finite");
  return PotentialSpec(potential::Constant{lambda});
}

PotentialSpec PotentialSpec::leray() { return PotentialSpec(potential::Leray{}); }

PotentialSpec PotentialSpec::gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("gamma potential requires gamma > 0");
  return PotentialSpec(potential::Gamma{gamma});
}

PotentialSpec PotentialSpec::wangye() { return PotentialSpec(potential::WangYe{}); }

PotentialSpec PotentialSpec::tabulated(std::vector<double> radii, std::vector<double> values, std::string source) {
  validate_table(radii, values);
  if (radii.back() > 1.0) throw InvalidInput("tabulated potential: radii must lie in (0, 1]");
  return PotentialSpec(potential::Tabulated{std::move(radii), std::move(values), std::move(source)});
}

PotentialSpec PotentialSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  const bool has_arg = colon != std::string::npos;
  if (head == "leray" && !has_arg) return leray();
  if (head == "wangye" && !has_arg) return wangye();
  if (head == "constant" && has_arg) return constant(parse_number(arg, "constant"));
  if (head == "gamma" && has_arg) return gamma(parse_number(arg, "gamma"));
  if (head == "tabulated" && has_arg) {
    auto cols = read_csv_columns_file(arg);
    return tabulated(std::move(cols.r), std::move(cols.value), arg);
  }
  throw InvalidInput("unknown potential '" + text + "' (expected constant:<l>, leray, gamma:<g>, wangye, tabulated:<csv>)");
}

std::string PotentialSpec::describe() const {
  return std::visit(overloaded{
                        [](const potential::Constant& c) { return "constant:" + fmt(c.lambda); },
                        [](const potential::Leray&) { return std::string("leray"); },
                        [](const potential::Gamma& g) { return "gamma:" + fmt(g.gamma); },
                        [](const potential::WangYe&) { return std::string("wangye"); },
                        [](const potential::Tabulated& t) { return "tabulated:" + t.source; },
                    },
                    kind_);
}

bool PotentialSpec::is_zero() const noexcept {
  const auto* c = std::get_if<potential::Constant>(&kind_);
  return c != nullptr && c->lambda == 0.0;
}

double PotentialSpec::eval(double r) const {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("potential evaluated outside (0, 1)");
  return at(r, 1.0 - r);
}

double PotentialSpec::at(double r, double x) const {
  return std::visit(overloaded{
                        [](const potential::Constant& c) { return c.lambda; },
                        [&](const potential::Leray&) {
                          const double l = log_inv(r, x);
                          const double rl = r * l;
                          return 1.0 / (4.0 * rl * rl);
                        },
                        [&](const potential::Gamma& g) {
                          const double l = log_inv(r, x);
                          const double rl = r * l;
                          const double m = std::max(std::pow(l, g.gamma), 1.0);
                          return 1.0 / (4.0 * rl * rl * m);
                        },
                        [&](const potential::WangYe&) {
                          const double q = x * (1.0 + r);
                          return 1.0 / (q * q);
                        },
                        [&](const potential::Tabulated& t) { return table_eval(t, r); },
                    },
                    kind_);
}

ClassVCheck check_class_V(const PotentialSpec& spec, const RadialGrid& grid, double slack) {
  ClassVCheck out;
  const auto& r = grid.nodes();
  double prev = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] >= 1.0) break;
    const double x = 1.0 - r[i];
    const double v = spec.at(r[i], x);
    if (!std::isfinite(v)) throw SingularEvaluation("potential is not finite", r[i]);
    const double q = x * (1.0 + r[i]);
    const double g = q * q * v;
    if (i > 0 && g > prev + slack * std::max(1.0, std::fabs(prev))) {
      out.member = false;
      out.index = i - 1;
      out.r_left = r[i - 1];
      out.r_right = r[i];
      out.g_left = prev;
      out.g_right = g;
      return out;
    }
    prev = g;
  }
  return out;
}

KatoCheck check_kato(const PotentialSpec& spec, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("Kato check requires alpha > 0");
  KatoCheck out;
  for (int m = 2; m <= 12; ++m) {
    const double r = std::pow(10.0, -m);
    const double l = std::log(1.0 / r);
    const double v = spec.eval(r);
    const double h = r * r * std::pow(l, 2.0 + alpha) * v;
    if (!std::isfinite(h)) throw SingularEvaluation("Kato weight is not finite", r);
    out.radii.push_back(r);
    out.h.push_back(h);
  }
  const std::size_t n = out.h.size();
  bool nonincreasing = true;
  for (std::size_t i = n - 5; i + 1 < n; ++i) nonincreasing = nonincreasing && out.h[i + 1] <= out.h[i];
  const double last = out.h.back();
  if (last > 0.0) {
    // Slope of log h against log log(1/r) over the tail.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = n - 5; i < n; ++i) {
      const double X = std::log(std::log(1.0 / out.radii[i]));
      const double Y = std::log(out.h[i]);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
    }
    const double k = 5.0;
    out.decay_exponent = -(k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  out.satisfied = nonincreasing && (last < 1e-6 || out.decay_exponent >= 0.05);
  return out;
}

PotentialSpec rearranged_potential(const potential::Tabulated& table, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidInput("rearranged potential requires R > 0");
  validate_table(table.radii, table.values);
  std::vector<double> nodes;
  std::vector<double> g;
  nodes.reserve(table.radii.size() + 1);
  for (std::size_t i = 0; i < table.radii.size(); ++i) {
    const double r = table.radii[i] / R;
    if (r >= 1.0) break;
    const double q = (1.0 - r) * (1.0 + r);
    nodes.push_back(r);
    g.push_back(q * q * R * R * table.values[i]);
  }
  if (nodes.empty()) throw InvalidInput("rearranged potential: no table radius lies inside the disk");
  nodes.push_back(1.0);
  g.push_back(g.back());
  RadialFunction gf(RadialGrid::from_nodes(std::move(nodes)), std::move(g), false);
  const RadialFunction gs = rearrange_decreasing(gf, MeasureProfile::hyperbolic());
  std::vector<double> radii;
  std::vector<double> values;
  for (std::size_t i = 0; i + 1 < gs.size(); ++i) {
    const double r = gs.grid()[i];
    const double q = (1.0 - r) * (1.0 + r);
    radii.push_back(r);
    values.push_back(gs[i] / (q * q));
  }
  return PotentialSpec::tabulated(std::move(radii), std::move(values), table.source + "#");
}

}  // namespace tmlab
