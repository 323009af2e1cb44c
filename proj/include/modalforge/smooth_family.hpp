#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "modalforge/lattice.hpp"

namespace modalforge {

/// Smooth approximation of the Heaviside step: 0 for x <= -1, 1 for x >= 1,
/// 1 / (1 + exp(N x / (x^2 - 1))) in between. Clamps to 0 or 1 once the
/// exponent leaves the double range. Requires N >= 1.
double smooth_step(int N, double x);

/// +1/N on even k, -1/N on odd k, for |k| <= 2n - 3; 0 elsewhere. n >= 2.
Rational perturbation(int n, int N, Index k);

/// Node value v(k) interpolated by g_unnormalized. For n >= 2 this is
/// build_q_raw(n)(k) + perturbation(n, N, k); for n = 1 it is 1 at +-1,
/// 1/N at 0 and 0 elsewhere.
double g_node_value(int n, int N, Index k);

/// Smooth bimodal interpolant of the node values:
/// (v(k+1) - v(k)) h_N(2(x - k - 1/2)) + v(k) on [k, k+1].
/// Zero for |x| >= g_support_radius(n). Requires n >= 1 and N >= 3.
double g_unnormalized(int n, int N, double x);

/// 2n - 2 for n >= 2, 2 for n = 1.
double g_support_radius(int n);

/// Scale a of the flat exponential exp(-(x/a)^(2N)): n - 3/2, or 3/2 for n = 1.
double f_scale(int n);

double f_unnormalized(int n, int N, double x);

/// Integral of f_unnormalized over R: 2 a Gamma(1 + 1/(2N)).
double f_normalization_closed_form(int n, int N);

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// g_unnormalized with its node table precomputed.
class SmoothStepInterp {
 public:
  /// Requires n >= 1 and N >= 3.
  SmoothStepInterp(int n, int N);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double node(Index k) const;
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int N() const { return N_; }

 private:
  int n_;
  int N_;
  Index radius_;
  std::vector<double> nodes_;  // v(-radius_), ..., v(radius_)
};
struct FlatExponential {
  int n = 1;
  int N = 1;
};
/// Arbitrary evaluable density, mostly for tests and diagnostics.
struct CustomDensity {
  std::string name;
  std::function<double(double)> fn;
};

/// Evaluable smooth density with its normalization constant and support.
/// Immutable once built.
class DensitySpec {
 public:
  using Kind = std::variant<SmoothStepInterp, FlatExponential, CustomDensity>;

  DensitySpec(Kind kind, double normalization, Interval support);

  /// Wraps `fn` (already normalized unless `normalization` says otherwise).
  static DensitySpec custom(std::string name, std::function<double(double)> fn,
                            Interval support, double normalization = 1.0);

  /// Normalized density at x.
  [[nodiscard]] double operator()(double x) const { return unnormalized(x) / normalization_; }
  [[nodiscard]] double unnormalized(double x) const;
  [[nodiscard]] double normalization() const { return normalization_; }
  [[nodiscard]] Interval support() const { return support_; }
  [[nodiscard]] const Kind& kind() const { return kind_; }
  [[nodiscard]] std::string describe() const;
  /// Initial quadrature panel width: min(0.25, 1/(2N)) for the families.
  [[nodiscard]] double panel_width() const;

 private:
  Kind kind_;
  double normalization_;
  Interval support_;
};

/// Values below this are treated as outside the support of the flat exponential.
inline constexpr double kTruncation = 1e-300;

/// Normalized smooth bimodal density. The normalization integral is computed
/// by adaptive quadrature to relative error below rel_tol.
/// Throws std::invalid_argument for n < 1 or N < 3, QuadratureError on failure.
DensitySpec g_density(int n, int N, double rel_tol = 1e-12);

/// Normalized flat-exponential (log-concave) density, normalized with the
/// Gamma closed form. Support is where the unnormalized value is >= 1e-300.
DensitySpec f_density(int n, int N);

/// Adaptive quadrature of the normalized density over [a, b].
double integrate(const DensitySpec& spec, double a, double b, double rel_tol = 1e-10);
/// Same for the unnormalized function.
double integrate_unnormalized(const DensitySpec& spec, double a, double b,
                              double rel_tol = 1e-10);

}  // namespace modalforge
