#include "modalforge/numeric_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "modalforge/constructions.hpp"
#include "modalforge/quadrature.hpp"

namespace modalforge {
namespace {

constexpr double kIndexSlack = 1e-6;

bool divides_one(double step) {
  const double inverse = 1.0 / step;
  return std::abs(inverse - std::round(inverse)) <= 1e-9 * inverse;
}

SampledFunction convolve_specs(const DensitySpec& f, const DensitySpec& g, double step) {
  const auto F = sample(f, Grid::covering(f.support().lo, f.support().hi, step));
  const auto G = sample(g, Grid::covering(g.support().lo, g.support().hi, step));
  return grid_convolve(F, G);
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

Grid::Grid(double x0_, double step_, Index count_) : x0(x0_), step(step_), count(count_) {
  if (!(step > 0.0) || !std::isfinite(step)) throw GridError("grid step must be positive");
  if (count < 2) throw GridError("grid needs at least two points");
}

Grid Grid::covering(double lo, double hi, double step) {
  if (!(step > 0.0)) throw GridError("grid step must be positive");
  if (!(lo <= hi)) throw GridError("grid bounds are reversed");
  const auto first = static_cast<Index>(std::floor(lo / step + kIndexSlack));
  const auto last = static_cast<Index>(std::ceil(hi / step - kIndexSlack));
  return Grid(static_cast<double>(first) * step, step, std::max<Index>(last - first + 1, 2));
}

std::optional<Index> Grid::index_of(double x) const {
  const double position = (x - x0) / step;
  const double nearest = std::round(position);
  if (std::abs(position - nearest) > kIndexSlack) return std::nullopt;
  const auto i = static_cast<Index>(nearest);
  if (i < 0 || i >= count) return std::nullopt;
  return i;
}

SampledFunction::SampledFunction(Grid grid_, std::vector<double> values_)
    : grid(grid_), values(std::move(values_)) {
  if (static_cast<Index>(values.size()) != grid.count) {
    throw GridError("sample count does not match the grid");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw GridError("sampled values must be finite");
  }
}

double SampledFunction::at(double x) const {
  const auto i = grid.index_of(x);
  if (!i) throw GridError("abscissa " + std::to_string(x) + " is not a grid point");
  return values[static_cast<std::size_t>(*i)];
}

double SampledFunction::at_or_zero(double x) const {
  const double slack = kIndexSlack * grid.step;
  if (x < grid.x0 - slack || x > grid.back() + slack) return 0.0;
  return at(x);
}

SampledFunction sample(const DensitySpec& spec, const Grid& grid) {
  const double slack = kIndexSlack * grid.step;
  if (grid.x0 > spec.support().lo + slack || grid.back() < spec.support().hi - slack) {
    throw GridError("grid [" + std::to_string(grid.x0) + ", " + std::to_string(grid.back()) +
                    "] does not cover the support of " + spec.describe());
  }
  std::vector<double> values(static_cast<std::size_t>(grid.count));
  for (Index i = 0; i < grid.count; ++i) values[static_cast<std::size_t>(i)] = spec(grid.abscissa(i));
  return SampledFunction(grid, std::move(values));
}

SampledFunction grid_convolve(const SampledFunction& F, const SampledFunction& G) {
  const double h = F.grid.step;
  if (std::abs(h - G.grid.step) > 1e-12 * h) throw GridError("grid_convolve: steps differ");
  const std::size_t nf = F.values.size();
  const std::size_t ng = G.values.size();
  std::vector<double> out(nf + ng - 1, 0.0);
  const double* g = G.values.data();
  for (std::size_t i = 0; i < nf; ++i) {
    const double weight = h * F.values[i];
    if (weight == 0.0) continue;
    double* dst = out.data() + i;
    for (std::size_t j = 0; j < ng; ++j) dst[j] += weight * g[j];
  }
  Grid grid(F.grid.x0 + G.grid.x0, h, static_cast<Index>(out.size()));
  return SampledFunction(grid, std::move(out));
}

ContinuousModeReport count_modes_sampled(const SampledFunction& F, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("count_modes_sampled: tau must be positive");
  const auto& v = F.values;
  const std::size_t size = v.size();
  ContinuousModeReport report;
  report.tolerance = tau;

  // Walks away from a plateau until the function has dropped by tau
  // (prominent on that side) or rises above the plateau (not prominent).
  // Equal heights count as higher to the right only, so a plateau broken up
  // by rounding noise yields a single mode.
  auto prominent = [&](std::size_t start, int direction, double level) {
    for (auto k = static_cast<std::ptrdiff_t>(start);
         k >= 0 && k < static_cast<std::ptrdiff_t>(size); k += direction) {
      const double value = v[static_cast<std::size_t>(k)];
      if (value > level || (direction > 0 && value == level)) return false;
      if (level - value >= tau) return true;
    }
    return false;
  };
  // Midpoint of the run around [i, j] that stays within rounding distance
  // of the peak level.
  auto representative = [&](std::size_t i, std::size_t j, double level) {
    const double floor = level - 1e-12 * std::abs(level);
    while (i > 0 && v[i - 1] >= floor) --i;
    while (j + 1 < size && v[j + 1] >= floor) ++j;
    return F.grid.x0 + 0.5 * static_cast<double>(i + j) * F.grid.step;
  };

  std::size_t i = 0;
  while (i < size) {
    std::size_t j = i;
    while (j + 1 < size && v[j + 1] == v[i]) ++j;
    const double level = v[i];
    if (i > 0 && j + 1 < size && v[i - 1] < level && v[j + 1] < level &&
        prominent(i - 1, -1, level) && prominent(j + 1, +1, level)) {
      report.mode_abscissas.push_back(representative(i, j, level));
    }
    i = j + 1;
  }
  report.count = static_cast<Index>(report.mode_abscissas.size());
  return report;
}

double sup_distance_on_integers(const SampledFunction& F, const LatticeFunction& a) {
  if (!divides_one(F.grid.step)) throw GridError("sup_distance_on_integers: step must divide 1");
  if (a.is_zero()) return 0.0;
  double worst = 0.0;
  for (Index m = a.first(); m <= a.last(); ++m) {
    const double gap = std::abs(F.at_or_zero(static_cast<double>(m)) - a(m).get_d());
    worst = std::max(worst, gap);
  }
  return worst;
}

double l1_distance(const DensitySpec& spec, const StepFunction& target, double rel_tol) {
  const LatticeFunction& base = target.base();
  Interval span = spec.support();
  std::vector<double> levels;
  if (!base.is_zero()) {
    const Rational mass = base.mass();
    if (sgn(mass) <= 0) throw std::domain_error("l1_distance: target mass must be positive");
    for (const auto& v : base.values()) levels.push_back(Rational(v / mass).get_d());
    span.lo = std::min(span.lo, static_cast<double>(base.first()) - 0.5);
    span.hi = std::max(span.hi, static_cast<double>(base.last()) + 0.5);
  }
  auto target_at = [&](double x) {
    if (levels.empty()) return 0.0;
    const Index k = StepFunction::cell_of(x) - base.first();
    if (k < 0 || k >= static_cast<Index>(levels.size())) return 0.0;
    return levels[static_cast<std::size_t>(k)];
  };

  std::vector<double> cuts;
  for (double x = std::ceil(span.lo - 0.5) + 0.5; x < span.hi; x += 1.0) cuts.push_back(x);

  QuadratureOptions options;
  options.rel_tol = rel_tol;
  options.abs_tol = 1e-14 * (span.hi - span.lo);
  options.panel_width = spec.panel_width();
  return integrate_detailed([&](double x) { return std::abs(spec(x) - target_at(x)); }, span.lo,
                            span.hi, options, cuts)
      .value;
}

double second_derivative_at(const SampledFunction& F, double x) {
  const auto i = F.grid.index_of(x);
  if (!i || *i == 0 || *i + 1 >= F.grid.count) {
    throw GridError("second_derivative_at: x and its neighbours must be grid points");
  }
  const auto k = static_cast<std::size_t>(*i);
  const double h = F.grid.step;
  return (F.values[k - 1] - 2.0 * F.values[k] + F.values[k + 1]) / (h * h);
}

double max_asymmetry(const SampledFunction& F) {
  double worst = 0.0;
  for (Index i = 0; i < F.grid.count; ++i) {
    const auto mirror = F.grid.index_of(-F.grid.abscissa(i));
    if (!mirror) continue;
    worst = std::max(worst, std::abs(F.values[static_cast<std::size_t>(i)] -
                                     F.values[static_cast<std::size_t>(*mirror)]));
  }
  return worst;
}

SampledFunction sampled_family_convolution(int n, int N, double step) {
  return convolve_specs(f_density(n, N), g_density(n, N), step);
}

double max_grid_step(int n) { return std::sqrt(difference_contrast(n).get_d()); }

void Theorem2Options::validate(int n) const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (N_schedule.empty()) throw std::invalid_argument("N schedule is empty");
  for (std::size_t i = 0; i < N_schedule.size(); ++i) {
    if (N_schedule[i] < 3) throw std::invalid_argument("every N in the schedule must be >= 3");
    if (i > 0 && N_schedule[i] <= N_schedule[i - 1]) {
      throw std::invalid_argument("N schedule must be strictly ascending");
    }
  }
  if (!(grid_step > 0.0) || !divides_one(grid_step)) {
    throw std::invalid_argument("grid step must be positive and divide 1");
  }
  if (grid_step > max_grid_step(n)) {
    throw std::invalid_argument("grid step " + std::to_string(grid_step) +
                                " is too coarse for the contrast at n=" + std::to_string(n) +
                                " (max " + std::to_string(max_grid_step(n)) + ")");
  }
  if (tau && !(*tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(margin_factor > 0.0)) throw std::invalid_argument("margin factor must be positive");
}

VerificationReport verify_theorem2(int n, const Theorem2Options& options) {
  options.validate(n);
  const double h = options.grid_step;
  const double tau = options.tau.value_or(difference_contrast(n).get_d() / 4.0);
  const LatticeFunction discrete = convolve(build_p(n), build_q(n));
  const std::vector<Index> predicted = predicted_mode_locations(n);

  VerificationReport report;
  report.n = n;
  nlohmann::json attempts = nlohmann::json::array();
  int succeeded_with = 0;

  for (int N : options.N_schedule) {
    const DensitySpec f = f_density(n, N);
    const DensitySpec g = g_density(n, N);
    const SampledFunction conv = convolve_specs(f, g, h);
    const SampledFunction fine = convolve_specs(f, g, h / 2.0);

    double quadrature_error = 0.0;
    for (Index m = -n; m <= n; ++m) {
      const auto x = static_cast<double>(m);
      quadrature_error = std::max(quadrature_error, std::abs(conv.at(x) - fine.at(x)));
    }
    bool pattern = true;
    double margin = std::numeric_limits<double>::infinity();
    for (Index m = -n; m < n; ++m) {
      const double step = conv.at(static_cast<double>(m + 1)) - conv.at(static_cast<double>(m));
      pattern = pattern && sign_of(step) == sgn(discrete(m + 1) - discrete(m));
      margin = std::min(margin, std::abs(step));
    }

    ContinuousModeReport found = count_modes_sampled(conv, tau);
    found.N_used = N;
    const bool odd_count = found.count % 2 != 0;
    bool parity = true;
    std::string parity_rule = "not applicable";
    if (n >= 2 && n % 2 == 0) {
      parity_rule = "zero is a strict local minimum and the mode count is even";
      parity = conv.at(0.0) < conv.at(-h) && conv.at(0.0) < conv.at(h) && !odd_count;
    } else if (n >= 3) {
      parity_rule = "negative second derivative at zero, zero is a mode, odd mode count";
      const bool zero_is_mode =
          std::any_of(found.mode_abscissas.begin(), found.mode_abscissas.end(),
                      [h](double x) { return std::abs(x) <= 2.0 * h; });
      parity = second_derivative_at(conv, 0.0) < 0.0 && zero_is_mode && odd_count;
    }

    const bool near_discrete = std::all_of(
        found.mode_abscissas.begin(), found.mode_abscissas.end(), [&](double x) {
          return std::any_of(predicted.begin(), predicted.end(), [x](Index m) {
            return std::abs(x - static_cast<double>(m)) <= 0.6;
          });
        });

    nlohmann::json attempt = {{"N", N},
                              {"pattern_matches", pattern},
                              {"margin", margin},
                              {"quadrature_error", quadrature_error},
                              {"mode_count", found.count},
                              {"mode_abscissas", found.mode_abscissas},
                              {"modes_near_discrete", near_discrete},
                              {"parity", parity},
                              {"parity_rule", parity_rule},
                              {"second_derivative_at_zero", second_derivative_at(conv, 0.0)},
                              {"sup_distance", sup_distance_on_integers(conv, discrete)},
                              {"max_asymmetry", max_asymmetry(conv)}};
    if (options.l1_diagnostics) {
      attempt["l1_f"] = l1_distance(f, step_extend(build_p(n)));
      attempt["l1_g"] = l1_distance(g, step_extend(build_q(n)));
    }

    report.checks.clear();
    report.set_check("sign_pattern", pattern);
    report.set_check("pattern_margin", margin > options.margin_factor * quadrature_error);
    report.set_check("mode_count_at_least_n", found.count >= n);
    if (n >= 2) report.set_check("parity", parity);
    report.modes = found;
    attempt["passed"] = report.passed;
    attempts.push_back(std::move(attempt));
    if (report.passed) {
      succeeded_with = N;
      break;
    }
  }
  report.set_check("within_schedule", succeeded_with != 0);

  report.parameters = {{"n", n},
                       {"N_schedule", options.N_schedule},
                       {"N_used", succeeded_with},
                       {"grid_step", h},
                       {"tau", tau},
                       {"margin_factor", options.margin_factor}};
  report.diagnostics = {{"attempts", attempts}};
  return report;
}

}  // namespace modalforge
