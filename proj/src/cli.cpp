#include "tmlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tmlab/audit.hpp"
#include "tmlab/errors.hpp"
#include "tmlab/forms.hpp"
#include "tmlab/groundstate.hpp"
#include "tmlab/probe.hpp"
#include "tmlab/rearrange.hpp"
#include "tmlab/report.hpp"
#include "tmlab/sampling.hpp"

namespace tmlab {

namespace {

using nlohmann::ordered_json;

/// Options of one subcommand, addressable by config-file key.
class Registry {
 public:
  explicit Registry(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& key, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + key, var, help)->capture_default_str();
    entries_.push_back({key, opt, [&var](const ordered_json& j) { var = j.get<T>(); },
                        [&var]() { return to_json(var); }});
    return opt;
  }

  CLI::App* app() const noexcept { return app_; }

  void apply_config(const std::string& path) const {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file '" + path + "'");
    ordered_json cfg;
    try {
      cfg = ordered_json::parse(in);
    } catch (const ordered_json::parse_error& e) {
      throw InvalidInput("config file '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw InvalidInput("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
      if (key == "command") {
        if (!value.is_string() || value.get<std::string>() != app_->get_name())
          throw InvalidInput("config command does not match '" + app_->get_name() + "'");
        continue;
      }
      const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
      if (it == entries_.end() || key == "config" || key == "out")
        throw InvalidInput("unknown config key '" + key + "' for " + app_->get_name());
      if (it->option->count() > 0) continue;
      try {
        it->set(value);
      } catch (const ordered_json::exception&) {
        throw InvalidInput("config key '" + key + "' has the wrong type");
      }
    }
  }

  /// Resolved options, excluding the file paths of the run itself.
  std::string echo() const {
    ordered_json j = ordered_json::object();
    j["command"] = app_->get_name();
    for (const Entry& e : entries_) {
      if (e.key == "config" || e.key == "out") continue;
      j[e.key] = e.get();
    }
    std::ostringstream os;
    os << j.dump();
    return os.str();
  }

 private:
  template <class T>
  static ordered_json to_json(const T& v) {
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(v)) return format_number(v);
    }
    return v;
  }

  struct Entry {
    std::string key;
    CLI::Option* option;
    std::function<void(const ordered_json&)> set;
    std::function<ordered_json()> get;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

struct Common {
  std::size_t n = RadialGrid::kDefaultSize;
  double eps = RadialGrid::kDefaultEps;
  std::string config;
  std::string out;
  std::string format = "csv";

  void add(Registry& reg) {
    reg.add("n", n, "grid size");
    reg.add("eps", eps, "inner grading parameter");
    reg.add("config", config, "JSON config file; flags override it");
    reg.add("out", out, "output file (default: standard output)");
    reg.add("format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  GridPtr grid() const { return RadialGrid::graded(n, eps); }
  std::string grid_text(const RadialGrid& g) const {
    if (g.grading().kind == Grading::Kind::logit)
      return "logit n=" + std::to_string(g.size()) + " eps=" + format_number(eps);
    return "custom n=" + std::to_string(g.size());
  }
};

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("invalid " + what + ": '" + s + "'");
  }
}

std::uint64_t parse_seed(const std::string& s) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("invalid seed: '" + s + "'");
  }
}

/// zero, moser:<k>, wk:<k>, bumps:<seed>, steps:<seed>, monotone:<seed> or file:<path>.
RadialFunction make_profile(const std::string& spec, const GridPtr& grid) {
  if (spec == "zero") return RadialFunction::zero(grid);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidInput("unknown profile '" + spec + "'");
  const std::string head = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (head == "file") return read_csv_file(arg);
  if (head == "moser") return moser_family(grid, parse_double(arg, "moser parameter"));
  if (head == "wk") return wk_profile(grid, parse_double(arg, "wk parameter"));
  if (head == "bumps" || head == "steps" || head == "monotone") {
    Rng rng(parse_seed(arg));
    if (head == "bumps") return sample_bumps(grid, rng);
    if (head == "steps") return sample_steps(grid, rng);
    return sample_monotone(grid, rng);
  }
  throw InvalidInput("unknown profile '" + spec + "'");
}

std::vector<double> parse_k_list(const std::string& text) {
  std::vector<double> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    ks.push_back(parse_double(item, "k value"));
  }
  return ks;
}

/// Writes to --out or to `out`; summary lines go to whichever stream does not hold the data.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& out, std::ostream& err) : out_(&out), summary_(&err) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InvalidInput("cannot open output file '" + path + "'");
      summary_ = &out;
    }
  }
  std::ostream& data() { return file_ ? *file_ : *out_; }
  std::ostream& summary() { return *summary_; }

 private:
  std::ostream* out_;
  std::ostream* summary_;
  std::unique_ptr<std::ofstream> file_;
};

struct ShootFlags {
  ShootOptions opt;
  void add(Registry& reg) {
    reg.add("rtol", opt.rtol, "ODE relative tolerance");
    reg.add("atol", opt.atol, "ODE absolute tolerance");
    reg.add("delta", opt.delta, "tolerance for phi(1) > 0");
    reg.add("divergence-ratio", opt.divergence_ratio, "decade ratio above which s(1) diverges");
    reg.add("kato-alpha", opt.kato_alpha, "exponent of the Kato-type decay check");
  }
  void tolerances(Provenance& p) const {
    p.tolerances = {{"rtol", opt.rtol},
                    {"atol", opt.atol},
                    {"delta", opt.delta},
                    {"divergence_ratio", opt.divergence_ratio},
                    {"kato_alpha", opt.kato_alpha}};
  }
};

struct EvalCmd {
  Common common;
  std::string u = "zero";
  std::string form = "none";
  double exponent = 4.0 * std::numbers::pi;

  void add(Registry& reg) {
    common.add(reg);
    reg.add("u", u, "profile: zero, moser:<k>, wk:<k>, bumps:<seed>, steps:<seed>, monotone:<seed>, file:<csv>");
    reg.add("form", form, "form: none, potential:<spec>, lp:<lambda>:<p> or a potential spec");
    reg.add("exponent", exponent, "exponent c in J");
  }

  int run(const Registry& reg, std::ostream& out, std::ostream& err) {
    const FormSpec f = FormSpec::parse(form);
    const RadialFunction prof = make_profile(u, common.grid());
    const double grad = gradient_norm_sq(prof);
    const double psi = remainder(f, prof);
    const JValue J = eval_J(prof, exponent);
    Scalars values = {{"grad_norm_sq", grad},
                      {"psi", psi},
                      {"Q", grad - psi},
                      {"J", J.value},
                      {"log_J", J.log_value},
                      {"J_overflow", J.overflow ? 1.0 : 0.0},
                      {"onofri_lhs", eval_onofri_lhs(prof)},
                      {"onofri_rhs", eval_onofri_rhs(prof, f)},
                      {"onofri_slack", onofri_slack(prof, f)},
                      {"luxemburg_norm", luxemburg_norm(prof)}};
    Provenance p{"eval", reg.echo(), common.grid_text(prof.grid()), {{"luxemburg_bisection", 1e-12}}};
    Sink sink(common.out, out, err);
    write_scalars(sink.data(), parse_format(common.format), p, values, {{"profile", u}, {"form", f.describe()}});
    sink.summary() << "Q=" << format_number(grad - psi) << " J=" << format_number(J.value) << '\n';
    return kExitOk;
  }
};

struct GroundStateCmd {
  Common common;
  ShootFlags shoot_flags;
  std::string potential;

  void add(Registry& reg) {
    common.add(reg);
    shoot_flags.add(reg);
    reg.add("potential", potential, "constant:<l>, leray, gamma:<g>, wangye or tabulated:<csv>");
  }

  int run(const Registry& reg, std::ostream& out, std::ostream& err) {
    if (potential.empty()) throw InvalidInput("groundstate requires --potential");
    const PotentialSpec spec = PotentialSpec::parse(potential);
    const GridPtr grid = common.grid();
    Provenance p{"groundstate", reg.echo(), common.grid_text(*grid), {}};
    shoot_flags.tolerances(p);
    const Format fmt = parse_format(common.format);
    Sink sink(common.out, out, err);
    try {
      GroundStateResult gs = shoot(spec, grid, shoot_flags.opt);
      transform_s(gs, shoot_flags.opt);
      write_groundstate(sink.data(), fmt, p, gs);
      sink.summary() << "classification: " << to_string(gs.classification) << '\n';
    } catch (const NodalSolution& e) {
      write_scalars(sink.data(), fmt, p, {{"nodal_radius", e.radius()}},
                    {{"potential", spec.describe()},
                     {"classification", to_string(Coercivity::Indefinite)},
                     {"diagnostic", e.what()}});
      sink.summary() << "classification: " << to_string(Coercivity::Indefinite) << " (" << e.what() << ")\n";
    }
    return kExitOk;
  }
};

struct ProbeCmd {
  Common common;
  ShootFlags shoot_flags;
  ProbeOptions popt;
  std::string form = "none";
  std::string family = "moser";
  std::string k;

  void add(Registry& reg) {
    common.add(reg);
    shoot_flags.add(reg);
    reg.add("form", form, "form: none, potential:<spec>, lp:<lambda>:<p> or a potential spec");
    reg.add("family", family, "moser, wk or gsapprox")->check(CLI::IsMember({"moser", "wk", "gsapprox"}));
    reg.add("k", k, "comma-separated parameters (default: family schedule)");
    reg.add("exponent", popt.exponent, "exponent c in J");
    reg.add("window", popt.window, "rows used by the growth fit");
    reg.add("rss-ratio", popt.rss_ratio, "residual ratio a growth model must beat");
    reg.add("min-increasing", popt.min_increasing, "trailing increases required for divergence");
  }

  int run(const Registry& reg, std::ostream& out, std::ostream& err) {
    const FormSpec f = FormSpec::parse(form);
    const GridPtr grid = common.grid();
    if (family != "moser" && family != "wk" && family != "gsapprox")
      throw InvalidInput("unknown family '" + family + "'");
    TrialFamily fam = TrialFamily::moser(grid);
    if (family == "wk") {
      fam = TrialFamily::wk(grid);
    } else if (family == "gsapprox") {
      const PotentialSpec* v = f.potential_spec();
      if (!v) throw InvalidInput("family gsapprox needs a potential form");
      auto gs = std::make_shared<GroundStateResult>(shoot(*v, grid, shoot_flags.opt));
      transform_s(*gs, shoot_flags.opt);
      fam = TrialFamily::gsapprox(std::move(gs));
    }
    const std::vector<double> ks = k.empty() ? fam.default_k() : parse_k_list(k);
    if (ks.empty()) throw InvalidInput("empty k list");
    const ProbeReport rep = probe_supremum(f, fam, ks, popt);
    Provenance p{"probe", reg.echo(), common.grid_text(*grid), {}};
    shoot_flags.tolerances(p);
    p.tolerances.emplace_back("rss_ratio", popt.rss_ratio);
    Sink sink(common.out, out, err);
    write_probe(sink.data(), parse_format(common.format), p, rep);
    sink.summary() << "verdict: " << to_string(rep.verdict) << " (" << rep.reason << ")\n";
    return kExitOk;
  }
};

struct AuditCmd {
  Common common;
  std::string ineq;
  std::string form = "none";
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  double tolerance = 1e-8;

  void add(Registry& reg) {
    common.add(reg);
    reg.add("ineq", ineq, "onofri, onofri-refined, adimurthi-druet or orlicz");
    reg.add("form", form, "form: none, potential:<spec>, lp:<lambda>:<p> or a potential spec");
    reg.add("samples", samples, "number of random profiles");
    reg.add("seed", seed, "sampler seed");
    reg.add("tolerance", tolerance, "slack below minus this value is a violation");
  }

  int run(const Registry& reg, std::ostream& out, std::ostream& err) {
    if (ineq.empty()) throw InvalidInput("audit requires --ineq");
    const Inequality which = parse_inequality(ineq);
    const FormSpec f = FormSpec::parse(form);
    const GridPtr grid = common.grid();
    const InequalityAudit a = run_audit(which, f, grid, samples, seed, tolerance);
    Provenance p{"audit", reg.echo(), common.grid_text(*grid), {{"violation", tolerance}}};
    Sink sink(common.out, out, err);
    write_audit(sink.data(), parse_format(common.format), p, a);
    sink.summary() << "violations: " << a.violations << " of " << a.rows.size() << " samples";
    if (a.skipped) sink.summary() << " (" << a.skipped << " skipped)";
    sink.summary() << '\n';
    return a.violations > 0 ? kExitViolation : kExitOk;
  }
};

struct RearrangeCmd {
  Common common;
  std::string u;
  std::string measure = "hyperbolic";

  void add(Registry& reg) {
    common.add(reg);
    reg.add("u", u, "profile, as for eval");
    reg.add("measure", measure, "hyperbolic or euclidean")->check(CLI::IsMember({"hyperbolic", "euclidean"}));
  }

  int run(const Registry& reg, std::ostream& out, std::ostream& err) {
    if (u.empty()) throw InvalidInput("rearrange requires --u");
    if (measure != "hyperbolic" && measure != "euclidean") throw InvalidInput("unknown measure '" + measure + "'");
    const MeasureProfile mu = measure == "euclidean" ? MeasureProfile::euclidean() : MeasureProfile::hyperbolic();
    const RadialFunction f = make_profile(u, common.grid());
    const RadialFunction g = rearrange_decreasing(f, mu);
    const double gap = check_equimeasurable(f, g, mu);
    Provenance p{"rearrange", reg.echo(), common.grid_text(f.grid()), {}};
    Sink sink(common.out, out, err);
    write_profile(sink.data(), parse_format(common.format), p, g);
    sink.summary() << "equimeasurability gap: " << format_number(gap) << '\n';
    return kExitOk;
  }
};

struct LambdaCmd {
  Common common;
  double p = 2.0;
  std::size_t starts = 32;
  std::uint64_t seed = 1;

  void add(Registry& reg) {
    common.add(reg);
    reg.add("p", p, "exponent; 2 gives the first Dirichlet eigenvalue");
    reg.add("starts", starts, "multistarts for p > 2");
    reg.add("seed", seed, "multistart seed");
  }

  int run(const Registry& reg, std::ostream& out, std::ostream& err) {
    if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidInput("lambda requires p >= 2");
    const GridPtr grid = common.grid();
    const LambdaEstimate est = p == 2.0 ? estimate_lambda_1(grid) : estimate_lambda_p(p, grid, starts, seed);
    Provenance prov{"lambda", reg.echo(), common.grid_text(*grid), {}};
    Sink sink(common.out, out, err);
    write_scalars(sink.data(), parse_format(common.format), prov,
                  {{"p", p},
                   {"lambda", est.value},
                   {"iterations", static_cast<double>(est.iterations)},
                   {"spread_min", est.spread_min},
                   {"spread_max", est.spread_max}});
    sink.summary() << "lambda=" << format_number(est.value) << '\n';
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trudinger-Moser inequalities with potentials: numerical laboratory", "tm-lab"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  EvalCmd eval;
  GroundStateCmd groundstate;
  ProbeCmd probe;
  AuditCmd audit;
  RearrangeCmd rearrange;
  LambdaCmd lambda;

  Registry r_eval(app.add_subcommand("eval", "evaluate Q, J, Onofri terms and the Luxemburg norm"));
  Registry r_gs(app.add_subcommand("groundstate", "shoot, transform and classify a potential"));
  Registry r_probe(app.add_subcommand("probe", "probe the supremum of J over a trial family"));
  Registry r_audit(app.add_subcommand("audit", "audit an inequality on random profiles"));
  Registry r_re(app.add_subcommand("rearrange", "nonincreasing rearrangement of a profile"));
  Registry r_lambda(app.add_subcommand("lambda", "estimate lambda_1 or lambda_p"));
  eval.add(r_eval);
  groundstate.add(r_gs);
  probe.add(r_probe);
  audit.add(r_audit);
  rearrange.add(r_re);
  lambda.add(r_lambda);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "tm-lab: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    auto dispatch = [&](auto& cmd, const Registry& reg, const std::string& config) {
      if (!config.empty()) reg.apply_config(config);
      return cmd.run(reg, out, err);
    };
    if (r_eval.app()->parsed()) return dispatch(eval, r_eval, eval.common.config);
    if (r_gs.app()->parsed()) return dispatch(groundstate, r_gs, groundstate.common.config);
    if (r_probe.app()->parsed()) return dispatch(probe, r_probe, probe.common.config);
    if (r_audit.app()->parsed()) return dispatch(audit, r_audit, audit.common.config);
    if (r_re.app()->parsed()) return dispatch(rearrange, r_re, rearrange.common.config);
    return dispatch(lambda, r_lambda, lambda.common.config);
  } catch (const InvalidInput& e) {
    err << "tm-lab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "tm-lab: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace tmlab
