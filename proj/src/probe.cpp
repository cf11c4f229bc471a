#include "tmlab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rss = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    f.rss += e * e;
  }
  return f;
}

}  // namespace

RadialFunction moser_family(GridPtr grid, double k) {
  if (!(k >= 2.0) || !std::isfinite(k)) throw ParameterError("Moser family requires k >= 2");
  if (1.0 / k < grid->inner()) throw ParameterError("Moser plateau radius 1/k lies inside the innermost node");
  const double L = std::log(k);
  const double sL = std::sqrt(L);
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return RadialFunction::sample(
      std::move(grid), [&](double r) { return c * std::min(sL, -std::log(r) / sL); }, true);
}

WkCutoff::WkCutoff(double k) : k_(k), log_k_(std::log(k)) {
  if (!(k > 1.0) || !std::isfinite(k)) throw ParameterError("w_k cutoff requires k > 1");
}

double WkCutoff::operator()(double s) const {
  if (s < 0.0) throw DomainError("w_k cutoff evaluated at negative s");
  return from_log(std::log(s));
}

double WkCutoff::from_log(double log_s) const {
  const double rest = 2.0 * log_k_ - log_s;
  if (rest <= 0.0) return 0.0;
  return std::min(log_k_, rest) / k_;
}

double WkCutoff::energy() const { return 2.0 * std::numbers::pi * log_k_ / (k_ * k_); }

RadialFunction wk_profile(GridPtr grid, double k) {
  const WkCutoff w(k);
  const double shift = 2.0 * std::log(k);
  return RadialFunction::sample(std::move(grid), [&](double r) { return w.from_log(shift + std::log(r)); }, true);
}

double ground_state_k_max(const GroundStateResult& gs) {
  if (!gs.transformed) throw InvalidInput("ground state approximants need the transform");
  const std::size_t n = gs.log_s.size();
  const double log_s_max = gs.s_divergent ? gs.log_s[n - 2] : gs.log_s_at_1;
  return std::exp(0.5 * log_s_max);
}

RadialFunction ground_state_approx(const GroundStateResult& gs, double k) {
  const double kmax = ground_state_k_max(gs);
  if (k > kmax * (1.0 + 1e-12)) throw ParameterError("k^2 exceeds the available range of s");
  const WkCutoff w(k);
  std::vector<double> v(gs.phi.size(), 0.0);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = gs.phi[i] * w.from_log(gs.log_s[i]);
  return RadialFunction(gs.phi.grid_ptr(), std::move(v), true);
}

TrialFamily TrialFamily::moser(GridPtr grid) { return TrialFamily(Kind::Moser, std::move(grid), nullptr); }

TrialFamily TrialFamily::wk(GridPtr grid) { return TrialFamily(Kind::WkCutoff, std::move(grid), nullptr); }

TrialFamily TrialFamily::gsapprox(std::shared_ptr<const GroundStateResult> gs) {
  if (!gs || !gs->transformed) throw InvalidInput("ground state family needs a transformed ground state");
  GridPtr g = gs->phi.grid_ptr();
  return TrialFamily(Kind::GroundStateApprox, std::move(g), std::move(gs));
}

std::string TrialFamily::name() const {
  switch (kind_) {
    case Kind::Moser:
      return "moser";
    case Kind::WkCutoff:
      return "wk";
    case Kind::GroundStateApprox:
      return "gsapprox";
  }
  return "moser";
}

RadialFunction TrialFamily::generate(double k) const {
  switch (kind_) {
    case Kind::Moser:
      return moser_family(grid_, k);
    case Kind::WkCutoff:
      return wk_profile(grid_, k);
    case Kind::GroundStateApprox:
      return ground_state_approx(*gs_, k);
  }
  throw InvalidInput("unknown family");
}

std::vector<double> TrialFamily::default_k() const {
  std::vector<double> ks;
  if (kind_ != Kind::GroundStateApprox) {
    for (int e = 1; e <= 14; ++e) ks.push_back(std::ldexp(1.0, e));
    return ks;
  }
  const double log_kmax = std::log(ground_state_k_max(*gs_));
  if (!(log_kmax > 0.0)) return ks;
  for (int j = 1; j <= 16; ++j) ks.push_back(std::exp(log_kmax * j / 16.0));
  return ks;
}

bool TrialFamily::unbounded() const noexcept {
  return kind_ != Kind::GroundStateApprox || gs_->s_divergent;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Bounded:
      return "Bounded";
    case Verdict::Divergent:
      return "Divergent";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

ProbeReport probe_supremum(const FormSpec& form, const TrialFamily& family, const std::vector<double>& k_list,
                           const ProbeOptions& opt) {
  ProbeReport rep;
  rep.family = family.name();
  rep.form = form.describe();
  rep.exponent = opt.exponent;
  rep.finite_range = !family.unbounded();
  rep.rows.resize(k_list.size());
  kernels::parallel_for(
      k_list.size(),
      [&](std::size_t i) {
        ProbeRow& row = rep.rows[i];
        row.k = k_list[i];
        try {
          const RadialFunction u = family.generate(row.k);
          row.Q = eval_Q(form, u, Exec::serial);
          if (!(row.Q > 0.0)) {
            row.nonpositive = true;
            row.J = kInf;
            row.log_J = kInf;
            return;
          }
          const RadialFunction un = u.scaled(1.0 / std::sqrt(row.Q));
          const JValue j = eval_J(un, opt.exponent, Exec::serial);
          row.J = j.value;
          row.log_J = j.log_value;
          row.overflow = j.overflow;
          row.Q_normalized = eval_Q(form, un, Exec::serial);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
      },
      opt.exec);
  classify_growth(rep, opt);
  return rep;
}

void classify_growth(ProbeReport& rep, const ProbeOptions& opt) {
  rep.fit = GrowthFit{};
  for (const ProbeRow& r : rep.rows) {
    if (r.error.empty() && r.nonpositive) {
      rep.verdict = Verdict::Divergent;
      rep.reason = "Q(u_k) <= 0 at k = " + std::to_string(r.k);
      return;
    }
  }
  for (const ProbeRow& r : rep.rows) {
    if (r.error.empty() && r.overflow) {
      rep.verdict = Verdict::Divergent;
      rep.reason = "J overflows at k = " + std::to_string(r.k);
      return;
    }
  }
  std::vector<const ProbeRow*> valid;
  for (const ProbeRow& r : rep.rows)
    if (r.error.empty()) valid.push_back(&r);
  if (valid.size() > opt.window) valid.erase(valid.begin(), valid.end() - static_cast<std::ptrdiff_t>(opt.window));
  if (valid.size() < 3) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "fewer than 3 usable rows";
    return;
  }

  std::vector<double> y, xl, xk;
  for (const ProbeRow* r : valid) {
    y.push_back(r->log_J);
    xl.push_back(std::log(r->k));
    xk.push_back(r->k);
  }
  const LineFit c = fit_line(std::vector<double>(y.size(), 0.0), y);
  const LineFit pw = fit_line(xl, y);
  const LineFit ex = fit_line(xk, y);
  GrowthFit& f = rep.fit;
  f.points = y.size();
  f.rss_constant = c.rss;
  f.rss_power = pw.rss;
  f.rss_exponential = ex.rss;
  f.power_rate = pw.slope;
  f.exponential_rate = ex.slope;
  f.model = "constant";
  f.amplitude = std::exp(c.intercept);
  f.rate = 0.0;
  const LineFit* best = nullptr;
  if (pw.slope > 0.0) best = &pw;
  if (ex.slope > 0.0 && (best == nullptr || ex.rss < best->rss)) best = &ex;
  const bool growth = best != nullptr && best->rss < opt.rss_ratio * c.rss;
  if (growth) {
    f.model = best == &pw ? "power" : "exponential";
    f.amplitude = std::exp(best->intercept);
    f.rate = best->slope;
  }

  std::vector<double> inc;
  for (std::size_t i = 0; i + 1 < valid.size(); ++i) inc.push_back(valid[i + 1]->J - valid[i]->J);
  std::size_t rising = 0;
  for (auto it = inc.rbegin(); it != inc.rend() && *it > 0.0; ++it) ++rising;

  if (rep.finite_range) {
    rep.verdict = Verdict::Bounded;
    rep.reason = "parameter range capped by finite s(1)";
    return;
  }
  if (growth && rising >= opt.min_increasing) {
    rep.verdict = Verdict::Divergent;
    rep.reason = f.model + " growth with " + std::to_string(rising) + " rising increments";
    return;
  }
  const std::size_t m = inc.size();
  bool shrinking = true;
  for (std::size_t i = m >= 3 ? m - 3 : 0; i + 1 < m; ++i) shrinking = shrinking && inc[i + 1] < inc[i];
  if (inc.back() <= 0.0) {
    rep.verdict = Verdict::Bounded;
    rep.reason = "J nonincreasing at the end";
  } else if (shrinking) {
    rep.verdict = Verdict::Bounded;
    rep.reason = "increments shrinking";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "no decisive trend";
  }
}

}  // namespace tmlab
