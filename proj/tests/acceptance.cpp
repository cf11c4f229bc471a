// Acceptance suite: one PASS/FAIL line per criterion. Pass a criterion number to run just that one.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tmlab/audit.hpp"
#include "tmlab/cli.hpp"
#include "tmlab/errors.hpp"
#include "tmlab/forms.hpp"
#include "tmlab/groundstate.hpp"
#include "tmlab/probe.hpp"
#include "tmlab/rearrange.hpp"
#include "tmlab/report.hpp"
#include "tmlab/sampling.hpp"

using namespace tmlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kLerayResidual = 1e-6;
constexpr double kLambdaError = 1e-3;
constexpr double kLambdaRefinement = 3.5;
constexpr double kTransformError = 1e-6;
constexpr double kJacobiResidual = 1e-3;
constexpr double kEquimeasurable = 1e-3;
constexpr double kHardyLittlewood = -1e-6;
constexpr double kPolyaSzego = -1e-4;
constexpr double kLpPreservation = 1e-3;
constexpr std::size_t kRearrangeGridSize = 8192;
constexpr double kOnofriSlack = 1e-8;
constexpr double kHolderSlack = -1e-10;
constexpr double kLuxemburgHomogeneity = 1e-8;
constexpr double kWkEnergy = 1e-6;
constexpr std::size_t kWkGridSize = 16384;
constexpr double kGroundStateQ = 1e-2;
constexpr double kGroundStateJ = 1e6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

GridPtr grid_n(std::size_t n) { return RadialGrid::graded(n); }

double lambda1() {
  static const double v = estimate_lambda_1(grid_n(4096)).value;
  return v;
}

double lambda4() {
  static const double v = estimate_lambda_p(4.0, grid_n(4096)).value;
  return v;
}

/// Divergent if any trial family diverges, Bounded if all are bounded.
Verdict probe_all(const PotentialSpec& v, std::string& trace) {
  const GridPtr grid = grid_n(4096);
  const FormSpec form = FormSpec::potential(v);
  std::vector<TrialFamily> families = {TrialFamily::moser(grid), TrialFamily::wk(grid)};
  try {
    auto gs = std::make_shared<GroundStateResult>(shoot(v, grid));
    transform_s(*gs);
    families.push_back(TrialFamily::gsapprox(gs));
  } catch (const NumericalError&) {
    trace += "gsapprox=n/a ";
  }
  bool all_bounded = true;
  bool divergent = false;
  for (const TrialFamily& fam : families) {
    const ProbeReport rep = probe_supremum(form, fam, fam.default_k());
    trace += fam.name() + "=" + to_string(rep.verdict) + " ";
    divergent = divergent || rep.verdict == Verdict::Divergent;
    all_bounded = all_bounded && rep.verdict == Verdict::Bounded;
  }
  if (divergent) return Verdict::Divergent;
  return all_bounded ? Verdict::Bounded : Verdict::Inconclusive;
}

struct CatalogueEntry {
  std::string name;
  PotentialSpec potential;
  Verdict expected;
};

const std::vector<CatalogueEntry>& catalogue() {
  static const std::vector<CatalogueEntry> c = {
      {"Constant(0.5 lambda1)", PotentialSpec::constant(0.5 * lambda1()), Verdict::Bounded},
      {"Leray", PotentialSpec::leray(), Verdict::Divergent},
      {"Gamma(0.5)", PotentialSpec::gamma(0.5), Verdict::Bounded},
      {"WangYe", PotentialSpec::wangye(), Verdict::Bounded},
      {"Constant(2 lambda1)", PotentialSpec::constant(2.0 * lambda1()), Verdict::Divergent},
  };
  return c;
}

std::map<std::string, Verdict>& probe_cache() {
  static std::map<std::string, Verdict> cache;
  return cache;
}

Verdict cached_probe(const CatalogueEntry& e, std::string& trace) {
  auto& cache = probe_cache();
  const auto it = cache.find(e.name);
  if (it != cache.end()) return it->second;
  return cache[e.name] = probe_all(e.potential, trace);
}

Outcome leray_residual() {
  const PotentialSpec v = PotentialSpec::leray();
  const auto phi = [](double r) { return std::sqrt(std::log(1.0 / r)); };
  const double z0 = std::log(1e-4 / (1.0 - 1e-4));
  double worst = 0.0;
  const int m = 2001;
  for (int i = 0; i < m; ++i) {
    const double z = z0 + (-2.0 * z0) * i / (m - 1);
    const double r = 1.0 / (1.0 + std::exp(-z));
    worst = std::max(worst, ode_residual(v, phi, r));
  }
  return {worst < kLerayResidual, "max residual " + fmt(worst)};
}

Outcome lambda_recovery() {
  const double j = oracle::bessel_j0_first_zero();
  const double exact = j * j;
  const double e1 = std::fabs(estimate_lambda_1(grid_n(2048)).value - exact);
  const double e2 = std::fabs(estimate_lambda_1(grid_n(4096)).value - exact);
  const double ratio = e1 / e2;
  return {e2 < kLambdaError && ratio >= kLambdaRefinement,
          "error " + fmt(e2) + " at n=4096, refinement ratio " + fmt(ratio)};
}

Outcome transform_closed_form() {
  GroundStateResult gs = shoot(PotentialSpec::constant(0.0), grid_n(4096));
  transform_s(gs);
  const auto& r = gs.phi.grid().nodes();
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    worst = std::max(worst, std::fabs(std::exp(gs.log_s[i]) - std::numbers::e * r[i]));
  const double end = std::fabs(gs.s_at_1 - std::numbers::e);
  return {worst < kTransformError && end < kTransformError,
          "max |s - e r| " + fmt(worst) + ", |s(1) - e| " + fmt(end)};
}

Outcome jacobi_identity() {
  auto worst_at = [](std::size_t n) {
    const GridPtr grid = grid_n(n);
    GroundStateResult gs = shoot(PotentialSpec::constant(2.0), grid);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
      Rng rng = Rng::stream(11, i);
      worst = std::max(worst, jacobi_identity_residual(gs, sample_bumps(grid, rng)));
    }
    return worst;
  };
  const double coarse = worst_at(2048);
  const double fine = worst_at(4096);
  return {fine < kJacobiResidual && fine < coarse,
          "max residual " + fmt(fine) + " at n=4096, " + fmt(coarse) + " at n=2048"};
}

Outcome dichotomy() {
  bool ok = true;
  std::string detail;
  for (const CatalogueEntry& e : catalogue()) {
    const CoercivityReport c = classify_coercivity(e.potential, grid_n(4096));
    std::string trace;
    const Verdict p = cached_probe(e, trace);
    const bool coercive = c.verdict == Coercivity::WeaklyCoercive;
    const bool agree = coercive ? p == Verdict::Bounded : p == Verdict::Divergent;
    const bool expected = p == e.expected;
    if (!(agree && expected)) ok = false;
    detail += e.name + ": " + to_string(c.verdict) + "/" + to_string(p) + (agree && expected ? "" : " [mismatch]") +
              "; ";
  }
  return {ok, detail};
}

Outcome sharp_exponent() {
  const GridPtr grid = grid_n(4096);
  const TrialFamily fam = TrialFamily::moser(grid);
  ProbeOptions at;
  ProbeOptions above;
  above.exponent = 4.4 * kPi;
  const ProbeReport a = probe_supremum(FormSpec::none(), fam, fam.default_k(), at);
  const ProbeReport b = probe_supremum(FormSpec::none(), fam, fam.default_k(), above);
  // Increments of log J over the last doublings shrink toward zero at 4 pi.
  const auto& rows = a.rows;
  const double last = std::fabs(rows.back().log_J - rows[rows.size() - 2].log_J);
  const double first = std::fabs(rows[1].log_J - rows[0].log_J);
  double peak = 0.0;
  for (const ProbeRow& r : rows) peak = std::max(peak, r.J);
  const bool ok = a.verdict == Verdict::Bounded && b.verdict == Verdict::Divergent && last < first;
  return {ok, "4pi: " + to_string(a.verdict) + " (max J " + fmt(peak) + "), 4.4pi: " + to_string(b.verdict) +
                  " (J(2^14) " + fmt(b.rows.back().J) + ")"};
}

Outcome rearrangement_suite() {
  const GridPtr grid = grid_n(kRearrangeGridSize);
  const MeasureProfile mu = MeasureProfile::hyperbolic();
  std::vector<RadialFunction> f;
  std::vector<RadialFunction> g;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = Rng::stream(21, i);
    f.push_back(sample_steps(grid, rng));
    g.push_back(rearrange_decreasing(f.back(), mu));
  }
  double eq = 0.0, hl = 0.0, ps = 0.0, lp = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    eq = std::max(eq, check_equimeasurable(f[i], g[i], mu));
    hl = std::min(hl, hardy_littlewood_gap(f[i], f[(i + 1) % f.size()], mu));
    ps = std::min(ps, polya_szego_gap(f[i]));
    for (double p : {1.0, 2.0, 4.0}) {
      const auto F = [p](double x) { return std::pow(std::fabs(x), p); };
      const double a = integral_mu(f[i], F, mu);
      const double b = integral_mu(g[i], F, mu);
      lp = std::max(lp, std::fabs(b - a) / std::max(1.0, std::fabs(a)));
    }
  }
  const bool ok = eq < kEquimeasurable && hl >= kHardyLittlewood && ps >= kPolyaSzego && lp < kLpPreservation;
  return {ok, "equimeasurability " + fmt(eq) + ", min HL gap " + fmt(hl) + ", min PS gap " + fmt(ps) +
                  ", Lp deviation " + fmt(lp)};
}

Outcome refined_onofri() {
  const GridPtr grid = grid_n(4096);
  const std::vector<std::pair<std::string, FormSpec>> forms = {
      {"Gamma(0.5)", FormSpec::potential(PotentialSpec::gamma(0.5))},
      {"WangYe", FormSpec::potential(PotentialSpec::wangye())},
      {"Constant(0.5 lambda1)", FormSpec::potential(PotentialSpec::constant(0.5 * lambda1()))},
      {"Lp(0.5 lambda4, 4)", FormSpec::lp(0.5 * lambda4(), 4.0)},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [name, form] : forms) {
    const InequalityAudit a = run_audit(Inequality::OnofriRefined, form, grid, 100, 1, kOnofriSlack);
    double worst = 0.0;
    for (const AuditSample& s : a.rows) worst = std::min(worst, s.slack);
    const bool zero_exact = a.rows.front().slack == 0.0;
    ok = ok && a.violations == 0 && zero_exact;
    detail += name + ": " + std::to_string(a.violations) + " violations (min slack " + fmt(worst) + ")" +
              (zero_exact ? "" : " [u=0 slack nonzero]") + "; ";
  }
  return {ok, detail};
}

Outcome holder_step() {
  const GridPtr grid = grid_n(4096);
  double worst = 0.0;
  for (double p : {3.0, 4.0, 6.0}) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      Rng rng = Rng::stream(31 + static_cast<std::uint64_t>(p), i);
      const RadialFunction u = sample_bumps(grid, rng).abs();
      const RadialFunction phi = sample_bumps(grid, rng).abs();
      worst = std::min(worst, holder_gap(u, phi, p));
    }
  }
  return {worst >= kHolderSlack, "min slack " + fmt(worst)};
}

Outcome orlicz_bound() {
  const GridPtr grid = grid_n(4096);
  bool ok = true;
  std::string detail;
  std::vector<std::pair<std::string, FormSpec>> forms = {{"none", FormSpec::none()}};
  for (const CatalogueEntry& e : catalogue()) {
    std::string trace;
    if (cached_probe(e, trace) == Verdict::Bounded) forms.emplace_back(e.name, FormSpec::potential(e.potential));
  }
  for (const auto& [name, form] : forms) {
    const InequalityAudit a = run_audit(Inequality::Orlicz, form, grid, 200, 3);
    ok = ok && a.best_constant > 0.0;
    detail += name + ": C " + fmt(a.best_constant) + "; ";
  }
  double worst = 0.0;
  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    Rng prof = Rng::stream(43, static_cast<std::uint64_t>(i));
    const RadialFunction u = sample_bumps(grid, prof);
    const double c = std::exp(rng.uniform(std::log(1e-3), std::log(1e3))) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const double base = std::fabs(c) * luxemburg_norm(u);
    worst = std::max(worst, std::fabs(luxemburg_norm(u.scaled(c)) - base));
  }
  ok = ok && worst < kLuxemburgHomogeneity;
  return {ok, detail + "homogeneity error " + fmt(worst)};
}

Outcome wk_energy_law() {
  // The cutoff has a kink at r = 1/k, which is added as a node.
  double worst = 0.0;
  for (int e = 1; e <= 14; ++e) {
    const double k = std::ldexp(1.0, e);
    const GridPtr grid = merge_grids(*grid_n(kWkGridSize), *RadialGrid::from_nodes({1.0 / k, 1.0}));
    const double exact = 2.0 * kPi * std::log(k) / (k * k);
    worst = std::max(worst, std::fabs(gradient_norm_sq(wk_profile(grid, k)) - exact));
  }
  const GridPtr grid = grid_n(4096);
  auto gs = std::make_shared<GroundStateResult>(shoot(PotentialSpec::leray(), grid));
  transform_s(*gs);
  const FormSpec form = FormSpec::potential(PotentialSpec::leray());
  const double q = eval_Q(form, ground_state_approx(*gs, 64.0));
  const TrialFamily fam = TrialFamily::gsapprox(gs);
  const ProbeReport rep = probe_supremum(form, fam, fam.default_k());
  double peak = 0.0;
  bool overflow = false;
  for (const ProbeRow& r : rep.rows) {
    overflow = overflow || r.overflow;
    if (std::isfinite(r.J)) peak = std::max(peak, r.J);
  }
  const bool ok = worst < kWkEnergy && q < kGroundStateQ && (overflow || peak > kGroundStateJ);
  return {ok, "energy error " + fmt(worst) + ", Q(k=64) " + fmt(q) + ", max J " +
                  (overflow ? std::string("overflow") : fmt(peak))};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> runs = {
      {"probe", "--form", "potential:leray", "--family", "gsapprox", "--format", "json"},
      {"probe", "--form", "none", "--family", "moser"},
      {"audit", "--ineq", "onofri", "--form", "none", "--samples", "50", "--seed", "7"},
      {"groundstate", "--potential", "gamma:0.5"},
      {"lambda", "--p", "4", "--starts", "8"},
      {"rearrange", "--u", "steps:5"},
  };
  const auto dir = std::filesystem::temp_directory_path() / "tmlab_acceptance";
  std::filesystem::create_directories(dir);
  bool ok = true;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::ostringstream a, b, err;
    run_cli(runs[i], a, err);
    run_cli(runs[i], b, err);
    ok = ok && !a.str().empty() && a.str() == b.str();
    std::string cmd;
    for (const std::string& arg : runs[i]) cmd += " '" + arg + "'";
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "4"}) {
      const auto path = dir / ("run" + std::to_string(i) + "_" + threads + ".out");
      const std::string line = std::string("OMP_NUM_THREADS=") + threads + " '" + TMLAB_CLI_PATH + "'" + cmd +
                               " --out '" + path.string() + "' > /dev/null 2>&1";
      const int rc = std::system(line.c_str());
      if (rc == -1) ok = false;
      outputs.push_back(slurp(path));
    }
    ok = ok && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == a.str();
    compared += 4;
  }
  return {ok, std::to_string(compared) + " outputs compared across repeats and thread counts"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "Leray ground-state residual", leray_residual},
      {2, "lambda_1 recovery", lambda_recovery},
      {3, "transform closed form", transform_closed_form},
      {4, "Jacobi identity", jacobi_identity},
      {5, "coercivity/supremum dichotomy", dichotomy},
      {6, "sharp exponent", sharp_exponent},
      {7, "rearrangement suite", rearrangement_suite},
      {8, "refined Onofri", refined_onofri},
      {9, "Holder step", holder_step},
      {10, "Orlicz bound", orlicz_bound},
      {11, "w_k energy law", wk_energy_law},
      {12, "determinism", determinism},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const Criterion& c : all) {
    if (only && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << c.id << ' ' << c.name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
