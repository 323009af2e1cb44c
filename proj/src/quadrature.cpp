#include "modalforge/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace modalforge {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Piece {
  double lo;
  double hi;
  double value;
  double error;
  double l1;
  unsigned depth;
};

struct LargerError {
  bool operator()(const Piece& a, const Piece& b) const { return a.error < b.error; }
};

Piece evaluate(const std::function<double(double)>& fn, double lo, double hi, unsigned depth) {
  Piece piece{lo, hi, 0.0, 0.0, 0.0, depth};
  // Depth 0: a single Kronrod/Gauss pair, no internal refinement.
  piece.value = Rule::integrate(fn, lo, hi, 0, 0.0, &piece.error, &piece.l1);
  return piece;
}

}  // namespace

// Globally adaptive: the piece with the largest error estimate is bisected
// until the summed estimate meets the tolerance.
QuadratureResult integrate_detailed(const std::function<double(double)>& fn, double a, double b,
                                    const QuadratureOptions& options,
                                    std::span<const double> breakpoints) {
  if (!(a < b)) throw std::invalid_argument("integrate: need a < b");
  if (!(options.rel_tol > 0.0) || !(options.panel_width > 0.0)) {
    throw std::invalid_argument("integrate: tolerance and panel width must be positive");
  }

  std::vector<double> cuts{a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Piece, std::vector<Piece>, LargerError> pieces;
  std::vector<Piece> settled;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / options.panel_width));
    const double width = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double left = lo + width * static_cast<double>(p);
      const double right = p + 1 == panels ? hi : lo + width * static_cast<double>(p + 1);
      pieces.push(evaluate(fn, left, right, 0));
    }
  }

  auto totals = [&] {
    QuadratureResult total;
    auto add = [&total](const Piece& p) {
      total.value += p.value;
      total.error += p.error;
      total.l1 += p.l1;
    };
    for (const auto& p : settled) add(p);
    auto copy = pieces;
    while (!copy.empty()) {
      add(copy.top());
      copy.pop();
    }
    return total;
  };

  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  {
    const QuadratureResult t = totals();
    value = t.value;
    error = t.error;
    l1 = t.l1;
  }
  auto target = [&] { return std::max(options.abs_tol, options.rel_tol * l1); };

  std::size_t iterations = 0;
  while (error > target() && !pieces.empty() && iterations < options.max_subdivisions) {
    Piece worst = pieces.top();
    pieces.pop();
    if (worst.depth >= options.max_depth) {
      settled.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Piece left = evaluate(fn, worst.lo, mid, worst.depth + 1);
    const Piece right = evaluate(fn, mid, worst.hi, worst.depth + 1);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    pieces.push(left);
    pieces.push(right);
    // Re-sum periodically so incremental updates do not drift.
    if (++iterations % 1024 == 0) {
      const QuadratureResult t = totals();
      value = t.value;
      error = t.error;
      l1 = t.l1;
    }
  }

  const QuadratureResult total = totals();
  if (!std::isfinite(total.value) ||
      total.error > std::max(options.abs_tol, options.rel_tol * total.l1)) {
    throw QuadratureError("integrate: no convergence on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "], error estimate " + std::to_string(total.error));
  }
  return total;
}

}  // namespace modalforge
