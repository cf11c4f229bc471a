#include "tmlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "tmlab/errors.hpp"

namespace tmlab {

namespace {

using nlohmann::ordered_json;

ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

ordered_json header(const Provenance& p) {
  ordered_json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["command"] = p.command;
  meta["config"] = ordered_json::parse(p.config_json.empty() ? "{}" : p.config_json);
  meta["grid"] = p.grid;
  ordered_json tol = ordered_json::object();
  for (const auto& [k, v] : p.tolerances) tol[k] = num(v);
  meta["tolerances"] = tol;
  return meta;
}

/// Pretty output for depth >= 0, single-line output for depth < 0.
void emit(std::ostream& out, const ordered_json& j, int depth) {
  const bool compact = depth < 0;
  const std::string pad(compact ? 0 : 2 * (depth + 1), ' ');
  const std::string close(compact ? 0 : 2 * depth, ' ');
  const char* nl = compact ? "" : "\n";
  const char* sep = compact ? ":" : ": ";
  const int next = compact ? depth : depth + 1;
  if (j.is_object()) {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << '{' << nl;
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out << ',' << nl;
      first = false;
      out << pad << ordered_json(k).dump() << sep;
      emit(out, v, next);
    }
    out << nl << close << '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      out << "[]";
      return;
    }
    out << '[' << nl;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out << ',' << nl;
      out << pad;
      emit(out, j[i], next);
    }
    out << nl << close << ']';
  } else if (j.is_number_float()) {
    out << format_number(j.get<double>());
  } else {
    out << j.dump();
  }
}

void dump(std::ostream& out, const ordered_json& j) {
  emit(out, j, 0);
  out << '\n';
}

void csv_header(std::ostream& out, const Provenance& p) {
  out << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
  out << "# command: " << p.command << '\n';
  out << "# config: ";
  emit(out, ordered_json::parse(p.config_json.empty() ? "{}" : p.config_json), -1);
  out << '\n';
  out << "# grid: " << p.grid << '\n';
  for (const auto& [k, v] : p.tolerances) out << "# tolerance " << k << ": " << format_number(v) << '\n';
}

ordered_json profile_json(const RadialFunction& u) {
  ordered_json r = ordered_json::array();
  ordered_json v = ordered_json::array();
  for (std::size_t i = 0; i < u.size(); ++i) {
    r.push_back(num(u.grid()[i]));
    v.push_back(num(u[i]));
  }
  return ordered_json{{"r", r}, {"value", v}};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw InvalidInput("unknown format '" + text + "' (expected csv or json)");
}

void write_scalars(std::ostream& out, Format f, const Provenance& p, const Scalars& values,
                   const std::vector<std::pair<std::string, std::string>>& labels) {
  if (f == Format::json) {
    ordered_json j;
    j["metadata"] = header(p);
    ordered_json res = ordered_json::object();
    for (const auto& [k, v] : labels) res[k] = v;
    for (const auto& [k, v] : values) res[k] = num(v);
    j["result"] = res;
    dump(out, j);
    return;
  }
  csv_header(out, p);
  out << "quantity,value\n";
  for (const auto& [k, v] : labels) out << k << ',' << v << '\n';
  for (const auto& [k, v] : values) out << k << ',' << format_number(v) << '\n';
}

void write_profile(std::ostream& out, Format f, const Provenance& p, const RadialFunction& u) {
  if (f == Format::json) {
    ordered_json j;
    j["metadata"] = header(p);
    j["profile"] = profile_json(u);
    dump(out, j);
    return;
  }
  csv_header(out, p);
  out << "r,value\n";
  for (std::size_t i = 0; i < u.size(); ++i) out << format_number(u.grid()[i]) << ',' << format_number(u[i]) << '\n';
}

void write_groundstate(std::ostream& out, Format f, const Provenance& p, const GroundStateResult& gs) {
  const auto& r = gs.phi.grid().nodes();
  if (f == Format::json) {
    ordered_json j;
    j["metadata"] = header(p);
    ordered_json res;
    res["potential"] = gs.potential.describe();
    res["classification"] = to_string(gs.classification);
    res["phi_at_1"] = num(gs.phi_at_1);
    res["s_at_1"] = gs.s_divergent ? ordered_json("divergent") : num(gs.s_at_1);
    res["log_s_at_1"] = num(gs.log_s_at_1);
    res["tail_ratio"] = num(gs.tail_ratio);
    res["gamma"] = num(gs.gamma);
    res["kato"] = gs.kato;
    ordered_json rr = ordered_json::array(), ph = ordered_json::array(), ls = ordered_json::array();
    for (std::size_t i = 0; i < r.size(); ++i) {
      rr.push_back(num(r[i]));
      ph.push_back(num(gs.phi[i]));
      ls.push_back(num(gs.log_s[i]));
    }
    res["r"] = rr;
    res["phi"] = ph;
    res["log_s"] = ls;
    j["result"] = res;
    dump(out, j);
    return;
  }
  csv_header(out, p);
  out << "r,phi,s\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    out << format_number(r[i]) << ',' << format_number(gs.phi[i]) << ',' << format_number(std::exp(gs.log_s[i]))
        << '\n';
  out << "# phi_at_1: " << format_number(gs.phi_at_1) << '\n';
  out << "# s_at_1: " << (gs.s_divergent ? std::string("divergent") : format_number(gs.s_at_1)) << '\n';
  out << "# log_s_at_1: " << format_number(gs.log_s_at_1) << '\n';
  out << "# gamma: " << format_number(gs.gamma) << '\n';
  out << "# kato: " << (gs.kato ? "true" : "false") << '\n';
  out << "# classification: " << to_string(gs.classification) << '\n';
}

void write_probe(std::ostream& out, Format f, const Provenance& p, const ProbeReport& rep) {
  if (f == Format::json) {
    ordered_json j;
    j["metadata"] = header(p);
    j["family"] = rep.family;
    j["form"] = rep.form;
    j["exponent"] = num(rep.exponent);
    ordered_json rows = ordered_json::array();
    for (const ProbeRow& r : rep.rows) {
      ordered_json o;
      o["k"] = num(r.k);
      o["Q"] = num(r.Q);
      o["J"] = num(r.J);
      o["log_J"] = num(r.log_J);
      o["overflow"] = r.overflow;
      o["nonpositive_Q"] = r.nonpositive;
      o["Q_normalized"] = num(r.Q_normalized);
      if (!r.error.empty()) o["error"] = r.error;
      rows.push_back(o);
    }
    j["rows"] = rows;
    ordered_json fit;
    fit["model"] = rep.fit.model;
    fit["params"] = ordered_json{{"amplitude", num(rep.fit.amplitude)}, {"rate", num(rep.fit.rate)}};
    fit["residual"] = ordered_json{{"constant", num(rep.fit.rss_constant)},
                                   {"power", num(rep.fit.rss_power)},
                                   {"exponential", num(rep.fit.rss_exponential)}};
    fit["points"] = rep.fit.points;
    j["fit"] = fit;
    j["verdict"] = to_string(rep.verdict);
    j["reason"] = rep.reason;
    dump(out, j);
    return;
  }
  csv_header(out, p);
  out << "# family: " << rep.family << '\n';
  out << "# form: " << rep.form << '\n';
  out << "# fit: " << rep.fit.model << " amplitude=" << format_number(rep.fit.amplitude)
      << " rate=" << format_number(rep.fit.rate) << " rss_constant=" << format_number(rep.fit.rss_constant)
      << " rss_power=" << format_number(rep.fit.rss_power)
      << " rss_exponential=" << format_number(rep.fit.rss_exponential) << '\n';
  out << "# verdict: " << to_string(rep.verdict) << " (" << rep.reason << ")\n";
  out << "k,Q,J,log_J,overflow,nonpositive_Q,Q_normalized,error\n";
  for (const ProbeRow& r : rep.rows)
    out << format_number(r.k) << ',' << format_number(r.Q) << ',' << format_number(r.J) << ','
        << format_number(r.log_J) << ',' << (r.overflow ? 1 : 0) << ',' << (r.nonpositive ? 1 : 0) << ','
        << format_number(r.Q_normalized) << ',' << r.error << '\n';
}

void write_audit(std::ostream& out, Format f, const Provenance& p, const InequalityAudit& a) {
  if (f == Format::json) {
    ordered_json j;
    j["metadata"] = header(p);
    j["inequality"] = to_string(a.inequality);
    j["form"] = a.form;
    j["seed"] = a.seed;
    j["tolerance"] = num(a.tolerance);
    j["violations"] = a.violations;
    j["skipped"] = a.skipped;
    if (a.inequality == Inequality::Orlicz) j["best_constant"] = num(a.best_constant);
    ordered_json rows = ordered_json::array();
    for (const AuditSample& s : a.rows) {
      ordered_json o;
      o["index"] = s.index;
      o["lhs"] = num(s.lhs);
      o["rhs"] = num(s.rhs);
      o["slack"] = num(s.slack);
      o["violation"] = s.violation;
      o["skipped"] = s.skipped;
      if (!s.note.empty()) o["note"] = s.note;
      rows.push_back(o);
    }
    j["samples"] = rows;
    dump(out, j);
    return;
  }
  csv_header(out, p);
  out << "# inequality: " << to_string(a.inequality) << '\n';
  out << "# form: " << a.form << '\n';
  out << "# violations: " << a.violations << '\n';
  out << "# skipped: " << a.skipped << '\n';
  if (a.inequality == Inequality::Orlicz) out << "# best_constant: " << format_number(a.best_constant) << '\n';
  out << "index,lhs,rhs,slack,violation,skipped,note\n";
  for (const AuditSample& s : a.rows)
    out << s.index << ',' << format_number(s.lhs) << ',' << format_number(s.rhs) << ',' << format_number(s.slack)
        << ',' << (s.violation ? 1 : 0) << ',' << (s.skipped ? 1 : 0) << ',' << s.note << '\n';
}

}  // namespace tmlab
