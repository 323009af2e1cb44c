#pragma once

#include <vector>

#include "modalforge/lattice.hpp"
#include "modalforge/report.hpp"

namespace modalforge {

enum class Variant { standard, strict_peak };

/// Parameters of one construction. `i` is the exponent of the strict-peak
/// variant and is ignored for the standard one.
struct ConstructionParams {
  int n = 1;
  Variant variant = Variant::standard;
  int i = 64;

  /// Throws std::invalid_argument unless n >= 1 (n >= 2 for strict_peak) and i >= 1.
  void validate() const;
};

/// Indicator of {-(n-2), ..., n-2}. Requires n >= 2.
LatticeFunction build_p_raw(int n);

/// The log-concave mass function: uniform on {-1, 0, 1} for n = 1, the
/// normalized build_p_raw(n) otherwise.
LatticeFunction build_p(int n);

/// Integer-valued symmetric bimodal construction; 1 at +-1 for n = 1.
LatticeFunction build_q_raw(int n);

/// Total mass of build_q_raw(n).
Rational normalizer(int n);

/// build_q_raw(n) / normalizer(n).
LatticeFunction build_q(int n);

/// Lattice locations of the two modes of build_q(n): +-(n-1) for even n,
/// +-(n-2) for odd n >= 3, +-1 for n = 1.
Index q_mode_location(int n);

/// Predicted single-point modes of build_p(n) * build_q(n): the n integers
/// -n+1, -n+3, ..., n-1.
std::vector<Index> predicted_mode_locations(int n);

/// Size 1/((2n-3) C_n) of the alternating difference steps of p_n * q_n
/// (n >= 2). For n = 1 this is 1/6, the smallest nonzero step of p_1 * q_1.
Rational difference_contrast(int n);

/// Restriction of exp(-(x / (n - 3/2))^(2i)) to Z, evaluated in
/// multiprecision floating point, truncated where it drops below 1e-300 and
/// normalized. The stored rationals are the exact values of the rounded
/// floats. Requires n >= 2, i >= 1.
LatticeFunction build_p_strict(int n, int i);

/// Same values before truncation-normalization: the rounded value of the
/// unnormalized function at m.
double p_strict_unnormalized(int n, int i, Index m);

/// Exact check of the backward-difference structure of p_n * q_n (n >= 2):
/// alternating +-contrast on 1..n-1 with the parity of the case, strictly
/// negative on n-1 < m <= 3n-4, zero beyond, and D(m) = -D(1-m) for m <= 0.
struct DifferencePattern {
  bool alternation = false;
  bool negative_tail = false;
  bool zero_beyond = false;
  bool antisymmetry = false;
  [[nodiscard]] bool holds() const {
    return alternation && negative_tail && zero_beyond && antisymmetry;
  }
};
DifferencePattern check_difference_pattern(int n);

/// Runs every exact check that p_n * q_n has exactly n modes at the predicted
/// locations. Never throws for n >= 1.
VerificationReport verify_theorem1(int n);

/// Strict-peak variant: p is the build_p_strict(n, i) function, compared
/// against the standard p_n * q_n inequality pattern at -n..n. The smallest
/// gap in the pattern is reported as parameters["margin"].
VerificationReport verify_theorem1_strict(int n, int i, double min_margin = 1e-9);

}  // namespace modalforge
