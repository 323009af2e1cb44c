#pragma once

#include <vector>

#include "modalforge/lattice.hpp"

namespace modalforge {

/// Step extension of a lattice function: takes the value base(k) on the
/// half-open cell (k - 1/2, k + 1/2].
class StepFunction {
 public:
  StepFunction() = default;
  explicit StepFunction(LatticeFunction base) : base_(std::move(base)) {}

  [[nodiscard]] const LatticeFunction& base() const { return base_; }
  [[nodiscard]] Rational operator()(const Rational& x) const;
  [[nodiscard]] double operator()(double x) const;
  /// Index of the cell containing x, i.e. the k with x in (k - 1/2, k + 1/2].
  [[nodiscard]] static Index cell_of(const Rational& x);
  [[nodiscard]] static Index cell_of(double x);

 private:
  LatticeFunction base_;
};

StepFunction step_extend(LatticeFunction a);

/// Node of a piecewise-affine function.
struct AffineNode {
  Index x = 0;
  Rational value;
  friend bool operator==(const AffineNode&, const AffineNode&) = default;
};

/// Continuous function, affine between consecutive integer nodes and zero
/// outside the node span. The first and last node values are 0.
class PiecewiseAffineFunction {
 public:
  PiecewiseAffineFunction() = default;
  /// Nodes must sit at consecutive integers and start and end at 0.
  /// Throws std::invalid_argument otherwise.
  explicit PiecewiseAffineFunction(std::vector<AffineNode> nodes);

  [[nodiscard]] const std::vector<AffineNode>& nodes() const { return nodes_; }
  [[nodiscard]] bool is_zero() const { return nodes_.empty(); }

 private:
  std::vector<AffineNode> nodes_;
};

/// Exact Phi(a) * Phi(b) over R. Built from the lattice convolution at the
/// integers; the step convolution is affine on each [l, l + 1].
PiecewiseAffineFunction step_convolve(const LatticeFunction& a, const LatticeFunction& b);

/// Exact evaluation with affine interpolation; 0 outside the node span.
Rational eval_pwa(const PiecewiseAffineFunction& f, const Rational& x);

/// Plateau maxima of the node sequence. Because f is affine between nodes,
/// these are exactly its local-maximum plateaus.
/// Throws std::domain_error for a negative node value.
ModeReport pwa_modes(const PiecewiseAffineFunction& f);

}  // namespace modalforge
