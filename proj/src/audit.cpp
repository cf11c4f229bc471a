#include "tmlab/audit.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tmlab/errors.hpp"
#include "tmlab/sampling.hpp"

namespace tmlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

AuditSample audit_one(Inequality ineq, const FormSpec& form, const RadialFunction& u) {
  AuditSample s;
  switch (ineq) {
    case Inequality::Onofri:
    case Inequality::OnofriRefined: {
      const FormSpec& f = ineq == Inequality::Onofri ? FormSpec::none() : form;
      s.lhs = eval_onofri_lhs(u, Exec::serial);
      s.rhs = eval_onofri_rhs(u, f, Exec::serial);
      s.slack = onofri_slack(u, f, Exec::serial);
      break;
    }
    case Inequality::AdimurthiDruet: {
      const double g = gradient_norm_sq(u, Exec::serial);
      if (g == 0.0) {
        s.skipped = true;
        s.note = "zero profile";
        break;
      }
      const RadialFunction v = u.scaled(1.0 / std::sqrt(g));
      const double psi = remainder(form, v, Exec::serial);
      if (!(psi > 0.0 && psi < 1.0)) {
        s.skipped = true;
        s.note = "psi outside (0, 1)";
        break;
      }
      s.lhs = eval_J(v, kFourPi * (1.0 + psi), Exec::serial).log_value;
      s.rhs = eval_J(v, kFourPi / (1.0 - psi), Exec::serial).log_value;
      s.slack = s.rhs - s.lhs;
      break;
    }
    case Inequality::Orlicz: {
      const double n = luxemburg_norm(u, Exec::serial);
      if (n == 0.0) {
        s.skipped = true;
        s.note = "zero profile";
        break;
      }
      s.lhs = n * n;
      s.rhs = eval_Q(form, u, Exec::serial);
      s.slack = s.rhs;
      break;
    }
  }
  return s;
}

}  // namespace

Inequality parse_inequality(const std::string& text) {
  if (text == "onofri") return Inequality::Onofri;
  if (text == "onofri-refined") return Inequality::OnofriRefined;
  if (text == "adimurthi-druet") return Inequality::AdimurthiDruet;
  if (text == "orlicz") return Inequality::Orlicz;
  throw InvalidInput("unknown inequality '" + text + "' (expected onofri, onofri-refined, adimurthi-druet, orlicz)");
}

std::string to_string(Inequality i) {
  switch (i) {
    case Inequality::Onofri:
      return "onofri";
    case Inequality::OnofriRefined:
      return "onofri-refined";
    case Inequality::AdimurthiDruet:
      return "adimurthi-druet";
    case Inequality::Orlicz:
      return "orlicz";
  }
  return "onofri";
}

InequalityAudit run_audit(Inequality ineq, const FormSpec& form, GridPtr grid, std::size_t samples,
                          std::uint64_t seed, double tolerance) {
  InequalityAudit audit;
  audit.inequality = ineq;
  audit.form = ineq == Inequality::Onofri ? "none" : form.describe();
  audit.seed = seed;
  audit.tolerance = tolerance;
  audit.rows.resize(samples + 1);
  kernels::parallel_for(samples + 1, [&](std::size_t i) {
    RadialFunction u = RadialFunction::zero(grid);
    if (i > 0) {
      Rng rng = Rng::stream(seed, i - 1);
      u = sample_bumps(grid, rng);
    }
    AuditSample s = audit_one(ineq, form, u);
    s.index = i;
    s.violation = !s.skipped && s.slack < -tolerance;
    audit.rows[i] = std::move(s);
  });
  audit.best_constant = std::numeric_limits<double>::infinity();
  for (const AuditSample& s : audit.rows) {
    if (s.skipped) ++audit.skipped;
    if (s.violation) ++audit.violations;
    if (ineq == Inequality::Orlicz && !s.skipped) audit.best_constant = std::min(audit.best_constant, s.rhs / s.lhs);
  }
  if (ineq != Inequality::Orlicz) audit.best_constant = 0.0;
  return audit;
}

}  // namespace tmlab
