#pragma once

#include <span>
#include <vector>

#include "modalforge/rational.hpp"

namespace modalforge {

/// Finitely supported function Z -> Q.
///
/// Stored as a window of values starting at `offset()`. The representation is
/// canonical: the first and last stored values are nonzero, and the zero
/// function has no stored values and offset 0. Two LatticeFunctions compare
/// equal iff they agree at every integer.
class LatticeFunction {
 public:
  LatticeFunction() = default;
  LatticeFunction(Index offset, std::vector<Rational> values);

  /// Value at m; exactly 0 outside the stored window.
  [[nodiscard]] Rational operator()(Index m) const;

  [[nodiscard]] bool is_zero() const { return values_.empty(); }
  [[nodiscard]] Index offset() const { return offset_; }
  /// Index of the first nonzero value. Meaningless for the zero function.
  [[nodiscard]] Index first() const { return offset_; }
  /// Index of the last nonzero value. Meaningless for the zero function.
  [[nodiscard]] Index last() const {
    return offset_ + static_cast<Index>(values_.size()) - 1;
  }
  [[nodiscard]] std::span<const Rational> values() const { return values_; }

  /// Sum of all values.
  [[nodiscard]] Rational mass() const;
  /// Largest value (0 for the zero function).
  [[nodiscard]] Rational max_value() const;
  [[nodiscard]] bool is_nonnegative() const;

  friend bool operator==(const LatticeFunction&, const LatticeFunction&) = default;

 private:
  Index offset_ = 0;
  std::vector<Rational> values_;
};

/// Integer interval [first, last] of the lattice.
struct ModeInterval {
  Index first = 0;
  Index last = 0;
  friend bool operator==(const ModeInterval&, const ModeInterval&) = default;
};

/// Plateau modes of a nonnegative lattice function.
struct ModeReport {
  std::vector<ModeInterval> modes;  // sorted, disjoint
  Index count = 0;
  Rational global_max;

  friend bool operator==(const ModeReport&, const ModeReport&) = default;
};

LatticeFunction make_lattice(Index offset, std::vector<Rational> values);

/// Indicator of {first, ..., last}, scaled by `height`.
LatticeFunction box(Index first, Index last, const Rational& height = 1);

/// Unit mass at m.
LatticeFunction delta(Index m);

/// (a * b)(m) = sum_k a(k) b(m - k), exact.
LatticeFunction convolve(const LatticeFunction& a, const LatticeFunction& b);

/// Backward difference: result(m) = a(m) - a(m - 1).
LatticeFunction finite_difference(const LatticeFunction& a);

LatticeFunction scale(const LatticeFunction& a, const Rational& factor);

/// Rescales a nonnegative function to total mass 1.
/// Throws std::domain_error for negative values or nonpositive mass.
LatticeFunction normalize(const LatticeFunction& a);

/// Maximal plateaus m..m+k with a(m-1) < a(m) = ... = a(m+k) > a(m+k+1).
/// Values outside the window are 0 and act as strict flanks.
/// Throws std::domain_error if any value is negative.
ModeReport modes(const LatticeFunction& a);

/// Same plateau scan over an explicit value sequence starting at `offset`,
/// with zero flanks beyond both ends.
ModeReport plateau_modes(Index offset, std::span<const Rational> values);

/// a(m)^2 >= a(m-1) a(m+1) for all m, and the support is one contiguous run.
/// Throws std::domain_error if any value is negative.
bool is_log_concave(const LatticeFunction& a);

/// a(m) == a(-m) for all m.
bool is_symmetric(const LatticeFunction& a);

}  // namespace modalforge
