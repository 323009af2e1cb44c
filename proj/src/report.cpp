#include "modalforge/report.hpp"

#include <algorithm>

#include <stdexcept>

namespace modalforge {

using nlohmann::json;

void VerificationReport::set_check(const std::string& name, bool value) {
  checks[name] = value;
  passed = true;
  for (const auto& [_, ok] : checks) passed = passed && ok;
}

std::vector<std::string> VerificationReport::failed_checks() const {
  std::vector<std::string> failed;
  for (const auto& [name, ok] : checks) {
    if (!ok) failed.push_back(name);
  }
  return failed;
}

json to_json(const ModeReport& report) {
  json intervals = json::array();
  for (const auto& m : report.modes) intervals.push_back({m.first, m.last});
  return {{"kind", "lattice"},
          {"count", report.count},
          {"global_max", to_string(report.global_max)},
          {"intervals", intervals}};
}

json to_json(const ContinuousModeReport& report) {
  return {{"kind", "continuous"},
          {"count", report.count},
          {"tolerance", report.tolerance},
          {"N_used", report.N_used},
          {"abscissas", report.mode_abscissas}};
}

json to_json(const VerificationReport& report) {
  json j;
  j["n"] = report.n;
  j["passed"] = report.passed;
  j["checks"] = json(report.checks);
  std::visit(
      [&](const auto& m) {
        json detail = to_json(m);
        if (detail["kind"] == "lattice") {
          j["modes"] = detail["intervals"];
          detail.erase("intervals");
        } else {
          j["modes"] = detail["abscissas"];
          detail.erase("abscissas");
        }
        j["mode_detail"] = std::move(detail);
      },
      report.modes);
  j["parameters"] = report.parameters;
  j["diagnostics"] = report.diagnostics;
  return j;
}

VerificationReport report_from_json(const json& j) {
  VerificationReport report;
  report.n = j.at("n").get<int>();
  report.checks = j.at("checks").get<std::map<std::string, bool>>();
  report.passed = j.at("passed").get<bool>();
  const bool all = std::all_of(report.checks.begin(), report.checks.end(),
                               [](const auto& entry) { return entry.second; });
  if (report.passed != all) throw std::invalid_argument("passed disagrees with the checks");
  const json& detail = j.at("mode_detail");
  const std::string kind = detail.at("kind").get<std::string>();
  if (kind == "lattice") {
    ModeReport m;
    for (const auto& pair : j.at("modes")) {
      m.modes.push_back({pair.at(0).get<Index>(), pair.at(1).get<Index>()});
    }
    m.count = detail.at("count").get<Index>();
    m.global_max = parse_rational(detail.at("global_max").get<std::string>());
    report.modes = std::move(m);
  } else if (kind == "continuous") {
    ContinuousModeReport m;
    m.mode_abscissas = j.at("modes").get<std::vector<double>>();
    m.count = detail.at("count").get<Index>();
    m.tolerance = detail.at("tolerance").get<double>();
    m.N_used = detail.at("N_used").get<int>();
    report.modes = std::move(m);
  } else {
    throw std::invalid_argument("unknown mode_detail kind: " + kind);
  }
  report.parameters = j.value("parameters", json::object());
  report.diagnostics = j.value("diagnostics", json::object());
  return report;
}

}  // namespace modalforge
