#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "modalforge/constructions.hpp"
#include "modalforge/numeric_lab.hpp"
#include "modalforge/report.hpp"
#include "modalforge/smooth_family.hpp"

namespace modalforge::cli {
namespace {

using nlohmann::json;

/// Raised for configurations that are rejected before any computation.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string command_line;
  std::optional<int> n;
  std::optional<int> n_max;
  std::string dist = "p";
  bool raw = false;
  std::string variant = "standard";
  std::optional<int> i;
  std::vector<int> N_schedule{8, 32, 128, 512};
  std::string grid_step = "1/256";
  std::string out_path;
  std::string format;
  int figure_id = 0;
  std::string what;
  std::optional<int> N;

  json parameters() const {
    json p = {{"command", command}};
    if (n) p["n"] = *n;
    if (n_max) p["n_max"] = *n_max;
    if (command == "construct") {
      p["dist"] = dist;
      p["raw"] = raw;
    }
    if (command == "construct" || command == "verify-discrete") {
      p["variant"] = variant;
      if (variant == "strict-peak") p["i"] = i.value_or(64);
    }
    if (command == "verify-continuous") {
      p["N_schedule"] = N_schedule;
      p["grid_step"] = grid_step;
    }
    if (command == "figure") {
      p["id"] = figure_id;
      if (!what.empty()) p["what"] = what;
      if (N) p["N"] = *N;
    }
    p["format"] = format;
    return p;
  }
};

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double parse_step(const std::string& text) {
  try {
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return value;
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    const double a = std::stod(num, &used);
    if (used != num.size()) throw std::invalid_argument(text);
    const double b = std::stod(den, &used);
    if (used != den.size()) throw std::invalid_argument(text);
    return a / b;
  } catch (const std::exception&) {
    throw UsageError("invalid --grid-step '" + text + "'");
  }
}

std::vector<int> requested_ns(const RunConfig& config, int smallest) {
  if (config.n && config.n_max) throw UsageError("--n and --n-max are mutually exclusive");
  if (config.n) {
    if (*config.n < 1) throw UsageError("--n must be >= 1");
    return {*config.n};
  }
  if (config.n_max) {
    if (*config.n_max < smallest) {
      throw UsageError("--n-max must be >= " + std::to_string(smallest));
    }
    std::vector<int> ns;
    for (int k = smallest; k <= *config.n_max; ++k) ns.push_back(k);
    return ns;
  }
  throw UsageError("one of --n or --n-max is required");
}

ConstructionParams construction_params(const RunConfig& config, int n) {
  ConstructionParams params;
  params.n = n;
  if (config.variant == "strict-peak") {
    params.variant = Variant::strict_peak;
    params.i = config.i.value_or(64);
  } else if (config.i) {
    throw UsageError("--i only applies to --variant strict-peak");
  }
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return params;
}

/// Collects the output document and writes it to --out or the given stream.
class Emitter {
 public:
  Emitter(const RunConfig& config, std::ostream& fallback) : config_(config), fallback_(fallback) {}

  json provenance() const {
    return {{"artifact", "modalforge"},
            {"version", kVersion},
            {"command_line", config_.command_line},
            {"parameters", config_.parameters()}};
  }

  std::string csv_header() const {
    std::ostringstream header;
    header << "# modalforge " << kVersion << "\n";
    header << "# command: " << config_.command_line << "\n";
    header << "# parameters: " << config_.parameters().dump() << "\n";
    return header.str();
  }

  void write(const std::string& body) const {
    if (config_.out_path.empty()) {
      fallback_ << body;
      fallback_.flush();
      return;
    }
    std::ofstream file(config_.out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + config_.out_path);
    file << body;
    if (!file) throw std::runtime_error("failed writing " + config_.out_path);
  }

 private:
  const RunConfig& config_;
  std::ostream& fallback_;
};

int cmd_construct(const RunConfig& config, std::ostream& out) {
  if (!config.n) throw UsageError("construct needs --n");
  if (config.dist != "p" && config.dist != "q") throw UsageError("--dist must be p or q");
  const ConstructionParams params = construction_params(config, *config.n);
  const bool strict = params.variant == Variant::strict_peak;
  if (strict && config.dist != "p") throw UsageError("the strict-peak variant only exists for p");
  if (strict && config.raw) throw UsageError("--raw is not available for the strict-peak variant");
  if (config.raw && config.dist == "p" && params.n < 2) {
    throw UsageError("the raw p construction needs n >= 2");
  }

  LatticeFunction fn;
  if (strict) {
    fn = build_p_strict(params.n, params.i);
  } else if (config.dist == "p") {
    fn = config.raw ? build_p_raw(params.n) : build_p(params.n);
  } else {
    fn = config.raw ? build_q_raw(params.n) : build_q(params.n);
  }

  const Emitter emitter(config, out);
  if (config.format == "json") {
    json rows = json::array();
    for (Index m = fn.first(); !fn.is_zero() && m <= fn.last(); ++m) {
      const Rational v = fn(m);
      if (strict) {
        rows.push_back({{"m", m}, {"value", v.get_d()}});
      } else {
        rows.push_back({{"m", m}, {"num", v.get_num().get_str()}, {"den", v.get_den().get_str()}});
      }
    }
    json doc = {{"provenance", emitter.provenance()},
                {"dist", config.dist},
                {"n", params.n},
                {"raw", config.raw},
                {"values", rows}};
    emitter.write(doc.dump(2) + "\n");
    return kSuccess;
  }
  std::ostringstream body;
  body << emitter.csv_header();
  body << (strict ? "m,value\n" : "m,num,den\n");
  for (Index m = fn.first(); !fn.is_zero() && m <= fn.last(); ++m) {
    const Rational v = fn(m);
    if (strict) {
      body << m << ',' << format_double(v.get_d()) << '\n';
    } else {
      body << m << ',' << v.get_num().get_str() << ',' << v.get_den().get_str() << '\n';
    }
  }
  emitter.write(body.str());
  return kSuccess;
}

template <class Fn>
std::vector<VerificationReport> sweep(const std::vector<int>& ns, Fn&& verify) {
  std::vector<std::future<VerificationReport>> pending;
  pending.reserve(ns.size());
  for (int n : ns) pending.push_back(std::async(std::launch::async, verify, n));
  std::vector<VerificationReport> reports;
  reports.reserve(ns.size());
  for (auto& p : pending) reports.push_back(p.get());
  return reports;
}

int emit_reports(const RunConfig& config, const std::vector<VerificationReport>& reports,
                 std::ostream& out, std::ostream& err) {
  const Emitter emitter(config, out);
  bool all_passed = true;
  for (const auto& r : reports) {
    if (r.passed) continue;
    all_passed = false;
    err << "n=" << r.n << ": failed checks:";
    for (const auto& name : r.failed_checks()) err << ' ' << name;
    err << '\n';
  }
  if (config.format == "csv") {
    std::ostringstream body;
    body << emitter.csv_header() << "n,passed,mode_count,failed_checks\n";
    for (const auto& r : reports) {
      const Index count = std::visit([](const auto& m) { return m.count; }, r.modes);
      std::string failed;
      for (const auto& name : r.failed_checks()) failed += (failed.empty() ? "" : ";") + name;
      body << r.n << ',' << (r.passed ? "true" : "false") << ',' << count << ',' << failed << '\n';
    }
    emitter.write(body.str());
  } else {
    json doc = json::array();
    for (const auto& r : reports) {
      json j = to_json(r);
      j["provenance"] = emitter.provenance();
      doc.push_back(std::move(j));
    }
    emitter.write(doc.dump(2) + "\n");
  }
  return all_passed ? kSuccess : kVerificationFailed;
}

int cmd_verify_discrete(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const bool strict = config.variant == "strict-peak";
  const std::vector<int> ns = requested_ns(config, strict ? 2 : 1);
  std::vector<ConstructionParams> params;
  for (int n : ns) params.push_back(construction_params(config, n));
  const int exponent = params.front().i;
  std::vector<VerificationReport> reports;
  if (strict) {
    reports = sweep(ns, [exponent](int n) { return verify_theorem1_strict(n, exponent); });
  } else {
    reports = sweep(ns, [](int n) { return verify_theorem1(n); });
  }
  return emit_reports(config, reports, out, err);
}

int cmd_verify_continuous(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.variant != "standard" || config.i) {
    throw UsageError("verify-continuous has no variants");
  }
  const std::vector<int> ns = requested_ns(config, 1);
  Theorem2Options options;
  options.N_schedule = config.N_schedule;
  options.grid_step = parse_step(config.grid_step);
  for (int n : ns) {
    try {
      options.validate(n);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const auto reports = sweep(ns, [&options](int n) { return verify_theorem2(n, options); });
  return emit_reports(config, reports, out, err);
}

struct Series {
  std::string name;
  std::vector<std::pair<std::string, std::string>> rows;  // formatted x, value
  json points = json::array();
};

Series lattice_series(const std::string& name, const LatticeFunction& fn) {
  Series s{name, {}, json::array()};
  for (Index m = fn.first(); !fn.is_zero() && m <= fn.last(); ++m) {
    s.rows.emplace_back(std::to_string(m), to_string(fn(m)));
    s.points.push_back({m, to_string(fn(m))});
  }
  return s;
}

template <class Fn>
Series sampled_series(const std::string& name, double lo, double hi, double step, Fn&& fn) {
  Series s{name, {}, json::array()};
  const auto count = static_cast<Index>(std::llround((hi - lo) / step));
  for (Index k = 0; k <= count; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    const double y = fn(x);
    s.rows.emplace_back(format_double(x), format_double(y));
    s.points.push_back({x, y});
  }
  return s;
}

int cmd_figure(const RunConfig& config, std::ostream& out) {
  std::vector<Series> series;
  switch (config.figure_id) {
    case 1:
    case 2:
    case 3: {
      const int n = config.n.value_or(config.figure_id == 3 ? 7 : 6);
      if (n < 2) throw UsageError("figures 1-3 need n >= 2");
      if (config.N) throw UsageError("--N only applies to figure 4");
      if (config.figure_id == 2) {
        series.push_back(lattice_series("convolution_raw", convolve(build_p_raw(n), build_q_raw(n))));
      } else {
        series.push_back(lattice_series("q_raw", build_q_raw(n)));
        series.push_back(lattice_series("p_raw", build_p_raw(n)));
      }
      break;
    }
    case 4: {
      const int n = config.n.value_or(5);
      const int N = config.N.value_or(10);
      if (n < 1) throw UsageError("--n must be >= 1");
      if (N < 3) throw UsageError("--N must be >= 3");
      series.push_back(sampled_series("h", -2.0, 2.0, 1.0 / 64.0,
                                      [N](double x) { return smooth_step(N, x); }));
      const SmoothStepInterp g(n, N);
      const double r = g_support_radius(n) + 1.0;
      series.push_back(sampled_series("g", -r, r, 1.0 / 64.0, [&g](double x) { return g(x); }));
      break;
    }
    default:
      throw UsageError("unknown figure id " + std::to_string(config.figure_id) +
                       " (expected 1, 2, 3 or 4)");
  }
  if (!config.what.empty()) {
    std::erase_if(series, [&](const Series& s) { return s.name != config.what; });
    if (series.empty()) throw UsageError("figure has no series named '" + config.what + "'");
  }

  const Emitter emitter(config, out);
  if (config.format == "json") {
    json doc = {{"provenance", emitter.provenance()}, {"figure", config.figure_id}};
    for (const auto& s : series) doc["series"][s.name] = s.points;
    emitter.write(doc.dump(2) + "\n");
    return kSuccess;
  }
  std::ostringstream body;
  body << emitter.csv_header();
  for (const auto& s : series) {
    body << "# series: " << s.name << "\n" << "x,value\n";
    for (const auto& [x, y] : s.rows) body << x << ',' << y << '\n';
  }
  emitter.write(body.str());
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  for (const auto& a : args) {
    config.command_line += (config.command_line.empty() ? "" : " ") + a;
  }

  CLI::App app{"Constructs and certifies convolutions of symmetric log-concave and bimodal "
               "distributions with many modes.",
               "modalforge"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);

  const std::vector<std::string> formats{"csv", "json"};
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", config.out_path, "Output path (default: stdout)");
    sub->add_option("--format", config.format, "Output format")->check(CLI::IsMember(formats));
  };

  auto* construct = app.add_subcommand("construct", "Emit one of the lattice constructions");
  construct->add_option("--n", config.n, "Target number of modes")->required();
  construct->add_option("--dist", config.dist, "Which distribution")
      ->check(CLI::IsMember({"p", "q"}));
  construct->add_flag("--raw", config.raw, "Emit the integer-valued unnormalized form");
  construct->add_option("--variant", config.variant, "Construction variant")
      ->check(CLI::IsMember({"standard", "strict-peak"}));
  construct->add_option("--i", config.i, "Exponent of the strict-peak variant");
  add_common(construct);

  auto* discrete = app.add_subcommand("verify-discrete", "Exact check of the lattice mode count");
  auto* d_n = discrete->add_option("--n", config.n, "Single n to verify");
  discrete->add_option("--n-max", config.n_max, "Verify every n up to this value")->excludes(d_n);
  discrete->add_option("--variant", config.variant, "Construction variant")
      ->check(CLI::IsMember({"standard", "strict-peak"}));
  discrete->add_option("--i", config.i, "Exponent of the strict-peak variant");
  add_common(discrete);

  auto* continuous =
      app.add_subcommand("verify-continuous", "Numeric check of the smooth mode count");
  auto* c_n = continuous->add_option("--n", config.n, "Single n to verify");
  continuous->add_option("--n-max", config.n_max, "Verify every n up to this value")->excludes(c_n);
  continuous->add_option("--N-schedule", config.N_schedule, "Ascending smoothing parameters")
      ->delimiter(',');
  continuous->add_option("--grid-step", config.grid_step, "Grid step, e.g. 1/256 or 0.00390625");
  add_common(continuous);

  auto* figure = app.add_subcommand("figure", "Emit plot-ready data for one figure");
  figure->add_option("--id", config.figure_id, "Figure id (1-4)")->required();
  figure->add_option("--what", config.what, "Emit only this series");
  figure->add_option("--n", config.n, "Override the construction size");
  figure->add_option("--N", config.N, "Smoothing parameter for figure 4");
  add_common(figure);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (construct->parsed()) {
      config.command = "construct";
      if (config.format.empty()) config.format = "csv";
      return cmd_construct(config, out);
    }
    if (discrete->parsed()) {
      config.command = "verify-discrete";
      if (config.format.empty()) config.format = "json";
      return cmd_verify_discrete(config, out, err);
    }
    if (continuous->parsed()) {
      config.command = "verify-continuous";
      if (config.format.empty()) config.format = "json";
      return cmd_verify_continuous(config, out, err);
    }
    config.command = "figure";
    if (config.format.empty()) config.format = "csv";
    return cmd_figure(config, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace modalforge::cli
