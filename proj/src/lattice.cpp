#include "modalforge/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace modalforge {

Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

LatticeFunction::LatticeFunction(Index offset, std::vector<Rational> values)
    : offset_(offset), values_(std::move(values)) {
  auto nonzero = [](const Rational& v) { return sgn(v) != 0; };
  auto head = std::find_if(values_.begin(), values_.end(), nonzero);
  if (head == values_.end()) {
    values_.clear();
    offset_ = 0;
    return;
  }
  auto tail = std::find_if(values_.rbegin(), values_.rend(), nonzero).base();
  offset_ += head - values_.begin();
  values_.erase(tail, values_.end());
  values_.erase(values_.begin(), head);
}

Rational LatticeFunction::operator()(Index m) const {
  if (is_zero() || m < first() || m > last()) return 0;
  return values_[static_cast<std::size_t>(m - offset_)];
}

Rational LatticeFunction::mass() const {
  Rational total = 0;
  for (const auto& v : values_) total += v;
  return total;
}

Rational LatticeFunction::max_value() const {
  Rational best = 0;
  for (const auto& v : values_) {
    if (v > best) best = v;
  }
  return best;
}

bool LatticeFunction::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const Rational& v) { return sgn(v) >= 0; });
}

LatticeFunction make_lattice(Index offset, std::vector<Rational> values) {
  return LatticeFunction(offset, std::move(values));
}

LatticeFunction box(Index first, Index last, const Rational& height) {
  if (last < first) return {};
  return LatticeFunction(first, std::vector<Rational>(static_cast<std::size_t>(last - first + 1), height));
}

LatticeFunction delta(Index m) { return LatticeFunction(m, {Rational(1)}); }

LatticeFunction convolve(const LatticeFunction& a, const LatticeFunction& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto av = a.values();
  const auto bv = b.values();
  std::vector<Rational> out(av.size() + bv.size() - 1, Rational(0));
  Rational term;
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (sgn(av[i]) == 0) continue;
    for (std::size_t j = 0; j < bv.size(); ++j) {
      term = av[i] * bv[j];
      out[i + j] += term;
    }
  }
  return LatticeFunction(a.offset() + b.offset(), std::move(out));
}

LatticeFunction finite_difference(const LatticeFunction& a) {
  if (a.is_zero()) return {};
  const auto av = a.values();
  std::vector<Rational> out(av.size() + 1);
  for (std::size_t i = 0; i <= av.size(); ++i) {
    Rational here = i < av.size() ? av[i] : Rational(0);
    Rational before = i > 0 ? av[i - 1] : Rational(0);
    out[i] = here - before;
  }
  return LatticeFunction(a.offset(), std::move(out));
}

LatticeFunction scale(const LatticeFunction& a, const Rational& factor) {
  std::vector<Rational> out(a.values().begin(), a.values().end());
  for (auto& v : out) v *= factor;
  return LatticeFunction(a.offset(), std::move(out));
}

LatticeFunction normalize(const LatticeFunction& a) {
  if (!a.is_nonnegative()) throw std::domain_error("normalize: negative value");
  const Rational total = a.mass();
  if (sgn(total) <= 0) throw std::domain_error("normalize: total mass must be positive");
  return scale(a, 1 / total);
}

ModeReport plateau_modes(Index offset, std::span<const Rational> values) {
  ModeReport report;
  report.global_max = 0;
  const std::size_t size = values.size();
  const Rational zero = 0;
  std::size_t i = 0;
  while (i < size) {
    if (sgn(values[i]) < 0) throw std::domain_error("modes: negative value");
    std::size_t j = i;
    while (j + 1 < size && values[j + 1] == values[i]) ++j;
    const Rational& level = values[i];
    if (level > report.global_max) report.global_max = level;
    const Rational& left = i > 0 ? values[i - 1] : zero;
    const Rational& right = j + 1 < size ? values[j + 1] : zero;
    if (left < level && level > right) {
      report.modes.push_back({offset + static_cast<Index>(i), offset + static_cast<Index>(j)});
    }
    i = j + 1;
  }
  report.count = static_cast<Index>(report.modes.size());
  return report;
}

ModeReport modes(const LatticeFunction& a) { return plateau_modes(a.offset(), a.values()); }

bool is_log_concave(const LatticeFunction& a) {
  if (!a.is_nonnegative()) throw std::domain_error("is_log_concave: negative value");
  const auto v = a.values();
  // Canonical form trims the ends, so any interior zero breaks contiguity.
  for (const auto& x : v) {
    if (sgn(x) == 0) return false;
  }
  for (std::size_t m = 1; m + 1 < v.size(); ++m) {
    if (v[m] * v[m] < v[m - 1] * v[m + 1]) return false;
  }
  return true;
}

bool is_symmetric(const LatticeFunction& a) {
  if (a.is_zero()) return true;
  if (a.first() != -a.last()) return false;
  const auto v = a.values();
  for (std::size_t i = 0, j = v.size() - 1; i < j; ++i, --j) {
    if (v[i] != v[j]) return false;
  }
  return true;
}

}  // namespace modalforge
