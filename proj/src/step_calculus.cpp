#include "modalforge/step_calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace modalforge {

Index StepFunction::cell_of(const Rational& x) {
  // k - 1/2 < x <= k + 1/2  <=>  k = ceil(x - 1/2).
  const Rational shifted = x - Rational(1, 2);
  mpz_class k;
  mpz_cdiv_q(k.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return static_cast<Index>(k.get_si());
}

Index StepFunction::cell_of(double x) { return static_cast<Index>(std::ceil(x - 0.5)); }

Rational StepFunction::operator()(const Rational& x) const { return base_(cell_of(x)); }

double StepFunction::operator()(double x) const { return base_(cell_of(x)).get_d(); }

StepFunction step_extend(LatticeFunction a) { return StepFunction(std::move(a)); }

PiecewiseAffineFunction::PiecewiseAffineFunction(std::vector<AffineNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) return;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (nodes_[i].x != nodes_[i - 1].x + 1) {
      throw std::invalid_argument("piecewise-affine nodes must be consecutive integers");
    }
  }
  if (sgn(nodes_.front().value) != 0 || sgn(nodes_.back().value) != 0) {
    throw std::invalid_argument("piecewise-affine function must vanish at its end nodes");
  }
}

PiecewiseAffineFunction step_convolve(const LatticeFunction& a, const LatticeFunction& b) {
  const LatticeFunction conv = convolve(a, b);
  if (conv.is_zero()) return {};
  std::vector<AffineNode> nodes;
  nodes.reserve(conv.values().size() + 2);
  nodes.push_back({conv.first() - 1, 0});
  for (Index l = conv.first(); l <= conv.last(); ++l) nodes.push_back({l, conv(l)});
  nodes.push_back({conv.last() + 1, 0});
  return PiecewiseAffineFunction(std::move(nodes));
}

Rational eval_pwa(const PiecewiseAffineFunction& f, const Rational& x) {
  const auto& nodes = f.nodes();
  if (nodes.empty()) return 0;
  if (x <= nodes.front().x || x >= nodes.back().x) return 0;
  mpz_class floor_x;
  mpz_fdiv_q(floor_x.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  const Index l = static_cast<Index>(floor_x.get_si());
  const auto i = static_cast<std::size_t>(l - nodes.front().x);
  const Rational t = x - Rational(l);
  return nodes[i].value + t * (nodes[i + 1].value - nodes[i].value);
}

ModeReport pwa_modes(const PiecewiseAffineFunction& f) {
  const auto& nodes = f.nodes();
  if (nodes.empty()) return plateau_modes(0, {});
  std::vector<Rational> values;
  values.reserve(nodes.size());
  for (const auto& node : nodes) values.push_back(node.value);
  return plateau_modes(nodes.front().x, values);
}

}  // namespace modalforge
