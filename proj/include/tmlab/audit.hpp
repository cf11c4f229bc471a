#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmlab/forms.hpp"
#include "tmlab/radial.hpp"

namespace tmlab {

enum class Inequality { Onofri, OnofriRefined, AdimurthiDruet, Orlicz };

/// `onofri`, `onofri-refined`, `adimurthi-druet`, `orlicz`.
Inequality parse_inequality(const std::string& text);
std::string to_string(Inequality i);

struct AuditSample {
  std::size_t index = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  ///< rhs - lhs, or log rhs - log lhs for the exponential integrals
  bool violation = false;
  bool skipped = false;
  std::string note;
};

struct InequalityAudit {
  Inequality inequality = Inequality::Onofri;
  std::string form;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  std::vector<AuditSample> rows;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  /// Smallest Q(u) / ||u||_Orl^2 over the samples (Orlicz audit only).
  double best_constant = 0.0;
};

/// Row 0 is u = 0; rows 1..samples are seeded bump profiles. A slack below
/// -tolerance is a violation.
InequalityAudit run_audit(Inequality ineq, const FormSpec& form, GridPtr grid, std::size_t samples,
                          std::uint64_t seed, double tolerance = 1e-8);

}  // namespace tmlab
