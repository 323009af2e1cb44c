#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "modalforge/lattice.hpp"

namespace modalforge {

/// Local maxima of a sampled real function, one representative per region.
struct ContinuousModeReport {
  std::vector<double> mode_abscissas;  // strictly increasing
  Index count = 0;
  double tolerance = 0.0;  // prominence threshold used
  int N_used = 0;

  friend bool operator==(const ContinuousModeReport&, const ContinuousModeReport&) = default;
};

/// Verdict of one theorem check. `passed` is always the conjunction of `checks`.
struct VerificationReport {
  int n = 0;
  bool passed = false;
  std::map<std::string, bool> checks;
  std::variant<ModeReport, ContinuousModeReport> modes;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json diagnostics = nlohmann::json::object();

  void set_check(const std::string& name, bool value);
  /// Names of the checks that did not hold.
  [[nodiscard]] std::vector<std::string> failed_checks() const;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

nlohmann::json to_json(const ModeReport& report);
nlohmann::json to_json(const ContinuousModeReport& report);

/// Schema: {n, passed, checks:{name:bool}, modes:[...], mode_detail:{...},
/// parameters:{...}, diagnostics:{...}}. Lattice modes serialize as
/// [first, last] pairs, continuous modes as abscissas.
nlohmann::json to_json(const VerificationReport& report);

/// Inverse of to_json. Throws nlohmann::json::exception or
/// std::invalid_argument on schema violations.
VerificationReport report_from_json(const nlohmann::json& j);

}  // namespace modalforge
