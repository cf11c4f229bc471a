#include "tmlab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kExpLimit = 700.0;

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

double max_abs(const RadialFunction& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::fabs(v));
  return m;
}

bool same_grid(const RadialFunction& a, const RadialFunction& b) {
  return a.grid_ptr() == b.grid_ptr() || a.grid().same_nodes(b.grid());
}

}  // namespace

FormSpec FormSpec::lp(double lambda, double p) {
  if (!std::isfinite(lambda)) throw InvalidInput("lp remainder: lambda must be finite");
  if (!(p > 2.0) || !std::isfinite(p)) throw InvalidInput("lp remainder requires p > 2");
  return FormSpec(form::LpRemainder{lambda, p});
}

FormSpec FormSpec::parse(const std::string& text) {
  if (text == "none") return none();
  if (text.rfind("potential:", 0) == 0) return potential(PotentialSpec::parse(text.substr(10)));
  if (text.rfind("lp:", 0) == 0) {
    const std::string rest = text.substr(3);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw InvalidInput("lp form expects lp:<lambda>:<p>");
    return lp(parse_number(rest.substr(0, colon), "lambda"), parse_number(rest.substr(colon + 1), "p"));
  }
  return potential(PotentialSpec::parse(text));
}

std::string FormSpec::describe() const {
  if (std::holds_alternative<form::None>(kind_)) return "none";
  if (const auto* p = std::get_if<form::PotentialRemainder>(&kind_)) return "potential:" + p->potential.describe();
  const auto& l = std::get<form::LpRemainder>(kind_);
  return "lp:" + fmt(l.lambda) + ":" + fmt(l.p);
}

const PotentialSpec* FormSpec::potential_spec() const noexcept {
  const auto* p = std::get_if<form::PotentialRemainder>(&kind_);
  return p ? &p->potential : nullptr;
}

double remainder(const FormSpec& form, const RadialFunction& u, Exec exec) {
  if (std::holds_alternative<form::None>(form.kind())) return 0.0;
  if (const auto* p = std::get_if<form::PotentialRemainder>(&form.kind())) {
    if (p->potential.is_zero()) return 0.0;
    return integral_weighted(u, [&](double r) { return p->potential.eval(r); }, exec);
  }
  const auto& l = std::get<form::LpRemainder>(form.kind());
  const double n = lp_norm(u, l.p, exec);
  return l.lambda * n * n;
}

double eval_Q(const FormSpec& form, const RadialFunction& u, Exec exec) {
  return gradient_norm_sq(u, exec) - remainder(form, u, exec);
}

JValue eval_J(const RadialFunction& u, double c, Exec exec) {
  const double m = max_abs(u);
  const double top = c * m * m;
  JValue out;
  if (top <= kExpLimit) {
    out.value = integrate_gauss(u, [c](double x) { return std::exp(c * x * x); }, exec);
    out.log_value = std::log(out.value);
    return out;
  }
  const double scaled = integrate_gauss(u, [c, top](double x) { return std::exp(c * x * x - top); }, exec);
  out.overflow = true;
  out.value = std::numeric_limits<double>::infinity();
  out.log_value = top + std::log(scaled);
  return out;
}

double onofri_excess(const RadialFunction& u, Exec exec) {
  return integrate_gauss(u, [](double x) { return std::expm1(x); }, exec) / kPi;
}

double eval_onofri_lhs(const RadialFunction& u, Exec exec) {
  const double d = onofri_excess(u, exec);
  return 1.0 + (std::log1p(d) - d / (1.0 + d));
}

double eval_onofri_rhs(const RadialFunction& u, const FormSpec& form, Exec exec) {
  return 1.0 + eval_Q(form, u, exec) / (16.0 * kPi);
}

double onofri_slack(const RadialFunction& u, const FormSpec& form, Exec exec) {
  const double d = onofri_excess(u, exec);
  return eval_Q(form, u, exec) / (16.0 * kPi) - (std::log1p(d) - d / (1.0 + d));
}

double luxemburg_norm(const RadialFunction& u, Exec exec) {
  const double m = max_abs(u);
  if (m == 0.0) return 0.0;
  const RadialFunction v = u.scaled(1.0 / m);
  // Orlicz modular of v / tau; decreasing in tau.
  auto exceeds = [&](double tau) {
    const double k = 4.0 * kPi / (tau * tau);
    if (k > kExpLimit) return true;
    return integrate_gauss(v, [k](double x) { return std::expm1(k * x * x); }, exec) > 1.0;
  };
  double lo = 1e-12;
  double hi = 10.0;
  while (exceeds(hi)) {
    lo = hi;
    hi *= 10.0;
  }
  while (hi / lo - 1.0 > 1e-12) {
    const double mid = std::sqrt(lo * hi);
    if (exceeds(mid))
      lo = mid;
    else
      hi = mid;
  }
  return m * hi;
}

bool subadditivity_check(double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw DomainError("subadditivity check requires positive arguments");
  auto F = [](double t) { return std::log(t) + 1.0 / t; };
  return F(t1 + t2) <= F(t1) + F(t2);
}

double holder_gap(const RadialFunction& u, const RadialFunction& phi, double p, Exec exec) {
  if (!(p > 2.0)) throw InvalidInput("holder_gap requires p > 2");
  if (!same_grid(u, phi)) throw InvalidInput("holder_gap: functions must share a grid");
  for (double v : u.values())
    if (v < 0.0) throw DomainError("holder_gap requires u >= 0");
  for (double v : phi.values())
    if (v < 0.0) throw DomainError("holder_gap requires phi >= 0");
  const double lhs = integrate_gauss(
      u, phi, [p](double a, double b) { return std::pow(a, p - 2.0) * b * b; }, exec);
  const double nu = lp_norm(u, p, exec);
  const double nphi = lp_norm(phi, p, exec);
  return std::pow(nu, p - 2.0) * nphi * nphi - lhs;
}

}  // namespace tmlab
