#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

namespace modalforge {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  /// Accepted absolute error, for integrands that are zero up to roundoff.
  double abs_tol = 0.0;
  /// Initial panels never exceed this width; each is refined adaptively.
  double panel_width = 0.25;
  unsigned max_depth = 30;
  /// Bisections allowed before giving up.
  std::size_t max_subdivisions = 500000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  double l1 = 0.0;     // integral of |fn|
};

/// Adaptive Gauss-Kronrod integration of fn over [a, b], split into panels
/// of at most options.panel_width and additionally at every breakpoint that
/// falls inside (a, b). Throws QuadratureError when the error estimate stays
/// above max(abs_tol, rel_tol * l1), and std::invalid_argument unless a < b.
QuadratureResult integrate_detailed(const std::function<double(double)>& fn, double a, double b,
                                    const QuadratureOptions& options = {},
                                    std::span<const double> breakpoints = {});

inline double integrate(const std::function<double(double)>& fn, double a, double b,
                        double rel_tol = 1e-10) {
  QuadratureOptions options;
  options.rel_tol = rel_tol;
  return integrate_detailed(fn, a, b, options).value;
}

}  // namespace modalforge
