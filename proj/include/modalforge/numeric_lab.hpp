#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "modalforge/lattice.hpp"
#include "modalforge/report.hpp"
#include "modalforge/smooth_family.hpp"
#include "modalforge/step_calculus.hpp"

namespace modalforge {

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform grid x0, x0 + step, ..., x0 + (count - 1) step.
struct Grid {
  double x0 = 0.0;
  double step = 1.0;
  Index count = 2;

  /// Throws GridError unless step > 0 and count >= 2.
  Grid(double x0, double step, Index count);

  /// Smallest grid on step * Z that contains [lo, hi].
  static Grid covering(double lo, double hi, double step);

  [[nodiscard]] double abscissa(Index i) const { return x0 + static_cast<double>(i) * step; }
  [[nodiscard]] double back() const { return abscissa(count - 1); }
  /// Index of the grid point at x (to within 1e-6 step), if any.
  [[nodiscard]] std::optional<Index> index_of(double x) const;
};

/// Real function sampled on a grid.
struct SampledFunction {
  Grid grid;
  std::vector<double> values;

  /// Throws GridError on a length mismatch or a non-finite value.
  SampledFunction(Grid grid, std::vector<double> values);

  /// Value at a grid abscissa. Throws GridError when x is off-grid.
  [[nodiscard]] double at(double x) const;
  /// Value at x if x is a grid point, 0 outside the grid span.
  /// Throws GridError when x is inside the span but between grid points.
  [[nodiscard]] double at_or_zero(double x) const;
};

/// Pointwise samples of the normalized density. Throws GridError when the
/// grid does not cover spec.support().
SampledFunction sample(const DensitySpec& spec, const Grid& grid);

/// Left-point Riemann convolution, result(x) = step * sum_i F(t_i) G(x - t_i),
/// on the grid spanning the sum of both supports. Throws GridError when the
/// steps differ.
SampledFunction grid_convolve(const SampledFunction& F, const SampledFunction& G);

/// Local-maximum regions of F whose value exceeds the lowest point on each
/// side (before a strictly higher sample) by at least tau. Throws
/// std::invalid_argument unless tau > 0.
ContinuousModeReport count_modes_sampled(const SampledFunction& F, double tau);

/// max over m in a's window of |F(m) - a(m)|. Integers outside F's grid count
/// as F(m) = 0. Throws GridError unless the grid step divides 1.
double sup_distance_on_integers(const SampledFunction& F, const LatticeFunction& a);

/// L1 distance between the normalized density and target / mass(target).
/// Throws QuadratureError if the requested accuracy is not reached.
double l1_distance(const DensitySpec& spec, const StepFunction& target, double rel_tol = 1e-8);

/// Central second difference at grid abscissa x. Throws GridError when x or
/// one of its neighbours is off-grid.
double second_derivative_at(const SampledFunction& F, double x);

/// max_i |F(x_i) - F(-x_i)| over grid points whose mirror is also on the grid.
double max_asymmetry(const SampledFunction& F);

/// f_density(n, N) * g_density(n, N) on step * Z.
SampledFunction sampled_family_convolution(int n, int N, double step);

/// Largest accepted grid step for the continuous check at n. The integer
/// pattern has contrast c = difference_contrast(n) and the Riemann error of
/// smooth integrands scales like step^2, so the step must satisfy
/// step <= sqrt(c).
double max_grid_step(int n);

struct Theorem2Options {
  std::vector<int> N_schedule{8, 32, 128, 512};
  double grid_step = 1.0 / 256.0;
  /// Prominence threshold; defaults to difference_contrast(n) / 4.
  std::optional<double> tau;
  /// Required ratio between the smallest pattern gap and the estimated
  /// quadrature error.
  double margin_factor = 10.0;
  /// Adds f and g L1 distances to the per-N diagnostics.
  bool l1_diagnostics = true;

  /// Throws std::invalid_argument when the options cannot be used for n.
  void validate(int n) const;
};

/// Escalates N through the schedule until the sampled f * g (a) reproduces
/// the strict inequality pattern of p_n * q_n at -n..n with margin above
/// margin_factor times the h vs h/2 discrepancy, (b) has at least n
/// prominent modes and (c) passes the parity test at 0. Reports the first
/// N that succeeds, or failure with per-N diagnostics.
VerificationReport verify_theorem2(int n, const Theorem2Options& options = {});

}  // namespace modalforge
