#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tmlab/audit.hpp"
#include "tmlab/groundstate.hpp"
#include "tmlab/probe.hpp"
#include "tmlab/radial.hpp"

namespace tmlab {

inline constexpr const char* kToolName = "tm-lab";
inline constexpr const char* kToolVersion = "1.0.0";

/// Run context written at the top of every output.
struct Provenance {
  std::string command;
  /// Resolved configuration as a compact JSON object.
  std::string config_json;
  std::string grid;  ///< e.g. "logit n=4096 eps=1e-08"
  std::vector<std::pair<std::string, double>> tolerances;
};

enum class Format { csv, json };
Format parse_format(const std::string& text);

/// Ordered name/value list for scalar results.
using Scalars = std::vector<std::pair<std::string, double>>;

void write_scalars(std::ostream& out, Format f, const Provenance& p, const Scalars& values,
                   const std::vector<std::pair<std::string, std::string>>& labels = {});
void write_profile(std::ostream& out, Format f, const Provenance& p, const RadialFunction& u);
void write_groundstate(std::ostream& out, Format f, const Provenance& p, const GroundStateResult& gs);
void write_probe(std::ostream& out, Format f, const Provenance& p, const ProbeReport& rep);
void write_audit(std::ostream& out, Format f, const Provenance& p, const InequalityAudit& audit);

/// %.17g, with inf and nan spelled out.
std::string format_number(double v);

}  // namespace tmlab
