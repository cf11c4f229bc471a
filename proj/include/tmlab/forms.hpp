#pragma once

#include <string>
#include <variant>

#include "tmlab/potentials.hpp"
#include "tmlab/radial.hpp"

namespace tmlab {

namespace form {

struct None {};
/// psi(u) = integral of V u^2.
struct PotentialRemainder {
  PotentialSpec potential;
};
/// psi(u) = lambda * ||u||_p^2 with p > 2.
struct LpRemainder {
  double lambda = 0.0;
  double p = 4.0;
};

}  // namespace form

/// Quadratic form Q(u) = ||grad u||^2 - psi(u).
class FormSpec {
 public:
  using Kind = std::variant<form::None, form::PotentialRemainder, form::LpRemainder>;

  FormSpec() = default;
  static FormSpec none() { return FormSpec(form::None{}); }
  static FormSpec potential(PotentialSpec v) { return FormSpec(form::PotentialRemainder{std::move(v)}); }
  static FormSpec lp(double lambda, double p);
  /// `none`, `potential:<potential>`, `lp:<lambda>:<p>`, or a bare potential spec.
  static FormSpec parse(const std::string& text);

  const Kind& kind() const noexcept { return kind_; }
  std::string describe() const;
  /// The potential of a PotentialRemainder form, null otherwise.
  const PotentialSpec* potential_spec() const noexcept;

 private:
  explicit FormSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_ = form::None{};
};

/// psi(u).
double remainder(const FormSpec& form, const RadialFunction& u, Exec exec = Exec::parallel);
double eval_Q(const FormSpec& form, const RadialFunction& u, Exec exec = Exec::parallel);

struct JValue {
  double value = 0.0;      ///< +inf when overflow is set
  double log_value = 0.0;  ///< always finite for finite u
  bool overflow = false;
};

/// 2 pi * integral of exp(c u^2) r dr. Flags overflow when c u^2 exceeds 700 somewhere.
JValue eval_J(const RadialFunction& u, double c = 4.0 * 3.14159265358979323846, Exec exec = Exec::parallel);

/// d = A - 1 with A the mean of e^u over the disk.
double onofri_excess(const RadialFunction& u, Exec exec = Exec::parallel);
/// log A + 1/A.
double eval_onofri_lhs(const RadialFunction& u, Exec exec = Exec::parallel);
/// 1 + Q(u) / (16 pi).
double eval_onofri_rhs(const RadialFunction& u, const FormSpec& form, Exec exec = Exec::parallel);
/// Right side minus left side, computed without cancellation at u = 0.
double onofri_slack(const RadialFunction& u, const FormSpec& form, Exec exec = Exec::parallel);

/// Luxemburg norm for the Young function exp(4 pi s^2) - 1.
double luxemburg_norm(const RadialFunction& u, Exec exec = Exec::parallel);

/// F(t1 + t2) <= F(t1) + F(t2) for F(t) = log t + 1/t.
bool subadditivity_check(double t1, double t2);

/// ||u||_p^(p-2) ||phi||_p^2 - integral of u^(p-2) phi^2, for u, phi >= 0 on one grid.
double holder_gap(const RadialFunction& u, const RadialFunction& phi, double p, Exec exec = Exec::parallel);

}  // namespace tmlab
