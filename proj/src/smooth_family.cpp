#include "modalforge/smooth_family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modalforge/constructions.hpp"
#include "modalforge/quadrature.hpp"

namespace modalforge {
namespace {

// Largest argument for which exp() stays finite in double precision.
constexpr double kExpLimit = 709.0;

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double smooth_step(int N, double x) {
  require(N >= 1, "smooth_step: N must be >= 1");
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double exponent = N * x / (x * x - 1.0);
  if (exponent > kExpLimit) return 0.0;
  if (exponent < -kExpLimit) return 1.0;
  return 1.0 / (1.0 + std::exp(exponent));
}

Rational perturbation(int n, int N, Index k) {
  require(n >= 2, "perturbation: n must be >= 2");
  require(N >= 1, "perturbation: N must be >= 1");
  if (k < -(2 * n - 3) || k > 2 * n - 3) return 0;
  return make_rational(k % 2 == 0 ? 1 : -1, N);
}

double g_node_value(int n, int N, Index k) {
  require(n >= 1, "g_node_value: n must be >= 1");
  if (n == 1) {
    if (k == 0) return 1.0 / N;
    return (k == 1 || k == -1) ? 1.0 : 0.0;
  }
  const Rational raw = build_q_raw(n)(k) + perturbation(n, N, k);
  return raw.get_d();
}

double g_support_radius(int n) { return n == 1 ? 2.0 : 2.0 * n - 2.0; }

SmoothStepInterp::SmoothStepInterp(int n, int N)
    : n_(n), N_(N), radius_(static_cast<Index>(g_support_radius(n))) {
  require(n >= 1, "g_unnormalized: n must be >= 1");
  require(N >= 3, "g_unnormalized: N must be >= 3");
  nodes_.reserve(static_cast<std::size_t>(2 * radius_ + 1));
  for (Index k = -radius_; k <= radius_; ++k) nodes_.push_back(g_node_value(n, N, k));
}

double SmoothStepInterp::node(Index k) const {
  if (k < -radius_ || k > radius_) return 0.0;
  return nodes_[static_cast<std::size_t>(k + radius_)];
}

double SmoothStepInterp::operator()(double x) const {
  // Evaluated on |x| so that symmetry holds exactly.
  x = std::abs(x);
  if (x >= static_cast<double>(radius_)) return 0.0;
  const double cell = std::floor(x);
  const auto k = static_cast<Index>(cell);
  const double here = node(k);
  const double next = node(k + 1);
  // h(-y) = 1 - h(y) without the cancellation near the ends of the cell.
  const double y = 2.0 * (x - cell - 0.5);
  return here * smooth_step(N_, -y) + next * smooth_step(N_, y);
}

double g_unnormalized(int n, int N, double x) { return SmoothStepInterp(n, N)(x); }

double f_scale(int n) {
  require(n >= 1, "f_scale: n must be >= 1");
  return n == 1 ? 1.5 : n - 1.5;
}

double f_unnormalized(int n, int N, double x) {
  require(N >= 1, "f_unnormalized: N must be >= 1");
  return std::exp(-std::pow(std::abs(x) / f_scale(n), 2.0 * N));
}

double f_normalization_closed_form(int n, int N) {
  require(N >= 1, "f_normalization_closed_form: N must be >= 1");
  return 2.0 * f_scale(n) * std::tgamma(1.0 + 1.0 / (2.0 * N));
}

DensitySpec::DensitySpec(Kind kind, double normalization, Interval support)
    : kind_(std::move(kind)), normalization_(normalization), support_(support) {
  require(normalization_ > 0.0 && std::isfinite(normalization_),
          "DensitySpec: normalization must be positive");
  require(support_.lo <= support_.hi, "DensitySpec: empty support");
}

DensitySpec DensitySpec::custom(std::string name, std::function<double(double)> fn,
                                Interval support, double normalization) {
  return DensitySpec(CustomDensity{std::move(name), std::move(fn)}, normalization, support);
}

double DensitySpec::unnormalized(double x) const {
  return std::visit(overloaded{
                        [x](const SmoothStepInterp& g) { return g(x); },
                        [x](const FlatExponential& f) { return f_unnormalized(f.n, f.N, x); },
                        [x](const CustomDensity& c) { return c.fn(x); },
                    },
                    kind_);
}

std::string DensitySpec::describe() const {
  return std::visit(
      overloaded{
          [](const SmoothStepInterp& g) {
            return "g(n=" + std::to_string(g.n()) + ", N=" + std::to_string(g.N()) + ")";
          },
          [](const FlatExponential& f) {
            return "f(n=" + std::to_string(f.n) + ", N=" + std::to_string(f.N) + ")";
          },
          [](const CustomDensity& c) { return c.name; },
      },
      kind_);
}

double DensitySpec::panel_width() const {
  return std::visit(
      overloaded{
          [](const SmoothStepInterp& g) { return std::min(0.25, 1.0 / (2.0 * g.N())); },
          [](const FlatExponential& f) { return std::min(0.25, 1.0 / (2.0 * f.N)); },
          [](const CustomDensity&) { return 0.25; },
      },
      kind_);
}

DensitySpec g_density(int n, int N, double rel_tol) {
  require(n >= 1, "g_density: n must be >= 1");
  require(N >= 3, "g_density: N must be >= 3 for the tilted plateaus to stay ordered");
  const double radius = g_support_radius(n);
  QuadratureOptions options;
  options.rel_tol = rel_tol;
  options.panel_width = std::min(0.25, 1.0 / (2.0 * N));
  const SmoothStepInterp g(n, N);
  const double mass =
      integrate_detailed([&g](double x) { return g(x); }, -radius, radius, options).value;
  return DensitySpec(g, mass, {-radius, radius});
}

DensitySpec f_density(int n, int N) {
  require(n >= 1, "f_density: n must be >= 1");
  require(N >= 1, "f_density: N must be >= 1");
  // exp(-(x/a)^(2N)) < 1e-300  <=>  |x| > a * (-ln 1e-300)^(1/(2N)).
  const double radius = f_scale(n) * std::pow(-std::log(kTruncation), 1.0 / (2.0 * N));
  return DensitySpec(FlatExponential{n, N}, f_normalization_closed_form(n, N), {-radius, radius});
}

double integrate_unnormalized(const DensitySpec& spec, double a, double b, double rel_tol) {
  QuadratureOptions options;
  options.rel_tol = rel_tol;
  options.panel_width = spec.panel_width();
  return integrate_detailed([&spec](double x) { return spec.unnormalized(x); }, a, b, options)
      .value;
}

double integrate(const DensitySpec& spec, double a, double b, double rel_tol) {
  return integrate_unnormalized(spec, a, b, rel_tol) / spec.normalization();
}

}  // namespace modalforge
