#include "modalforge/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <mpfr.h>

namespace modalforge {
namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

/// Mirrors a nonnegative-side table t[0..K] onto Z: f(k) = f(-k) = t[|k|].
LatticeFunction mirror(const std::vector<Rational>& nonnegative_part) {
  const auto K = static_cast<Index>(nonnegative_part.size()) - 1;
  std::vector<Rational> values(nonnegative_part.rbegin(), nonnegative_part.rend());
  values.insert(values.end(), nonnegative_part.begin() + 1, nonnegative_part.end());
  return LatticeFunction(-K, std::move(values));
}

// Nonnegative half of q~_n for even n >= 2, indices 0..2n-3.
std::vector<Rational> q_half_even(int n) {
  std::vector<Rational> t(static_cast<std::size_t>(2 * n - 2), Rational(0));
  for (int k = 1; k <= n / 2 - 1; ++k) {
    t[2 * k - 1] = t[2 * k] = 2 * k + 1;
    t[2 * n - 2 - 2 * k] = t[2 * n - 1 - 2 * k] = 2 * k;
  }
  t[n - 1] = n;
  t[0] = 1;
  return t;
}

// Nonnegative half of q~_n for odd n >= 3, indices 0..2n-3.
std::vector<Rational> q_half_odd(int n) {
  std::vector<Rational> t(static_cast<std::size_t>(2 * n - 2), Rational(0));
  for (int k = 1; k <= (n - 1) / 2 - 1; ++k) t[2 * k - 1] = t[2 * k] = 2 * k + 1;
  for (int k = 1; k <= (n - 1) / 2; ++k) t[2 * n - 2 - 2 * k] = t[2 * n - 1 - 2 * k] = 2 * k;
  t[n - 2] = n;
  t[0] = 1;
  return t;
}

/// RAII wrapper over an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision) { mpfr_init2(value_, precision); }
  ~BigFloat() { mpfr_clear(value_); }
  BigFloat(const BigFloat&) = delete;
  BigFloat& operator=(const BigFloat&) = delete;
  mpfr_ptr get() { return value_; }

 private:
  mpfr_t value_;
};

double flat_exponent_scale(int n) { return n - 1.5; }

/// Bits needed so that exp(-(1/a)^(2i)) still differs from 1 by many ulps.
mpfr_prec_t strict_peak_precision(int n, int i) {
  const double a = flat_exponent_scale(n);
  const double deficit = a > 1.0 ? 2.0 * i * std::log2(a) : 0.0;
  return static_cast<mpfr_prec_t>(128 + std::ceil(deficit));
}

/// exp(-(m / a)^(2i)) with a = (2n - 3)/2, rounded to `out`'s precision.
void strict_peak_value(int n, int i, Index m, BigFloat& out) {
  BigFloat ratio(mpfr_get_prec(out.get()));
  mpfr_set_si(ratio.get(), static_cast<long>(2 * m), MPFR_RNDN);
  mpfr_div_si(ratio.get(), ratio.get(), 2 * n - 3, MPFR_RNDN);
  mpfr_pow_ui(ratio.get(), ratio.get(), static_cast<unsigned long>(2 * i), MPFR_RNDN);
  mpfr_neg(ratio.get(), ratio.get(), MPFR_RNDN);
  mpfr_exp(out.get(), ratio.get(), MPFR_RNDN);
}

constexpr double kStrictTruncation = 1e-300;

}  // namespace

void ConstructionParams::validate() const {
  require(n >= 1, "n must be >= 1");
  if (variant == Variant::strict_peak) {
    require(n >= 2, "the strict-peak variant needs n >= 2");
    require(i >= 1, "the strict-peak exponent i must be >= 1");
  }
}

LatticeFunction build_p_raw(int n) {
  require(n >= 2, "build_p_raw: n must be >= 2");
  return box(-(n - 2), n - 2);
}

LatticeFunction build_p(int n) {
  require(n >= 1, "build_p: n must be >= 1");
  if (n == 1) return box(-1, 1, make_rational(1, 3));
  return scale(build_p_raw(n), make_rational(1, 2 * n - 3));
}

LatticeFunction build_q_raw(int n) {
  require(n >= 1, "build_q_raw: n must be >= 1");
  if (n == 1) return LatticeFunction(-1, {1, 0, 1});
  return mirror(n % 2 == 0 ? q_half_even(n) : q_half_odd(n));
}

Rational normalizer(int n) { return build_q_raw(n).mass(); }

LatticeFunction build_q(int n) { return normalize(build_q_raw(n)); }

Index q_mode_location(int n) {
  require(n >= 1, "q_mode_location: n must be >= 1");
  if (n == 1) return 1;
  return n % 2 == 0 ? n - 1 : n - 2;
}

std::vector<Index> predicted_mode_locations(int n) {
  require(n >= 1, "predicted_mode_locations: n must be >= 1");
  std::vector<Index> out;
  for (Index m = -n + 1; m <= n - 1; m += 2) out.push_back(m);
  return out;
}

Rational difference_contrast(int n) {
  require(n >= 1, "difference_contrast: n must be >= 1");
  if (n == 1) return make_rational(1, 6);
  return 1 / (Rational(2 * n - 3) * normalizer(n));
}

double p_strict_unnormalized(int n, int i, Index m) {
  ConstructionParams{n, Variant::strict_peak, i}.validate();
  BigFloat value(strict_peak_precision(n, i));
  strict_peak_value(n, i, m, value);
  return mpfr_get_d(value.get(), MPFR_RNDN);
}

LatticeFunction build_p_strict(int n, int i) {
  ConstructionParams{n, Variant::strict_peak, i}.validate();
  const mpfr_prec_t precision = strict_peak_precision(n, i);
  BigFloat value(precision);
  BigFloat threshold(precision);
  mpfr_set_d(threshold.get(), kStrictTruncation, MPFR_RNDN);

  std::vector<Rational> half;
  mpq_t exact;
  mpq_init(exact);
  for (Index m = 0;; ++m) {
    strict_peak_value(n, i, m, value);
    if (mpfr_less_p(value.get(), threshold.get())) break;
    mpfr_get_q(exact, value.get());
    half.emplace_back(exact);
  }
  mpq_clear(exact);
  return normalize(mirror(half));
}

DifferencePattern check_difference_pattern(int n) {
  require(n >= 2, "check_difference_pattern: n must be >= 2");
  const LatticeFunction diff = finite_difference(convolve(build_p(n), build_q(n)));
  const Rational step = difference_contrast(n);
  DifferencePattern pattern;

  pattern.alternation = true;
  for (Index m = 1; m <= n - 1; ++m) {
    const bool positive = (n % 2 == 0) ? (m % 2 != 0) : (m % 2 == 0);
    pattern.alternation = pattern.alternation && diff(m) == (positive ? step : Rational(-step));
  }
  pattern.negative_tail = true;
  for (Index m = n; m <= 3 * n - 4; ++m) {
    pattern.negative_tail = pattern.negative_tail && sgn(diff(m)) < 0;
  }
  pattern.zero_beyond = diff.is_zero() || diff.last() <= 3 * n - 4;

  pattern.antisymmetry = true;
  if (!diff.is_zero()) {
    const Index lowest = std::min(diff.first(), 1 - diff.last());
    for (Index m = lowest; m <= 0; ++m) {
      pattern.antisymmetry = pattern.antisymmetry && diff(m) == -diff(1 - m);
    }
  }
  return pattern;
}

VerificationReport verify_theorem1(int n) {
  require(n >= 1, "verify_theorem1: n must be >= 1");
  VerificationReport report;
  report.n = n;

  const LatticeFunction p = build_p(n);
  const LatticeFunction q = build_q(n);
  report.set_check("p_normalized", p.mass() == 1);
  report.set_check("p_symmetric", is_symmetric(p));
  report.set_check("p_log_concave", is_log_concave(p));
  report.set_check("q_normalized", q.mass() == 1);
  report.set_check("q_symmetric", is_symmetric(q));

  const Index peak = q_mode_location(n);
  const ModeReport q_modes = modes(q);
  report.set_check("q_bimodal",
                   q_modes.modes == std::vector<ModeInterval>{{-peak, -peak}, {peak, peak}});
  report.set_check("q_minimum_at_zero", q(0) < q(1) && q(0) < q(-1));

  const LatticeFunction conv = convolve(p, q);
  report.set_check("convolution_symmetric", is_symmetric(conv));

  const ModeReport conv_modes = modes(conv);
  std::vector<ModeInterval> expected;
  for (Index m : predicted_mode_locations(n)) expected.push_back({m, m});
  report.set_check("mode_count", conv_modes.count == n);
  report.set_check("mode_locations", conv_modes.modes == expected);
  report.set_check("modes_are_global_maxima",
                   std::all_of(conv_modes.modes.begin(), conv_modes.modes.end(),
                               [&](const ModeInterval& m) {
                                 return conv(m.first) == conv_modes.global_max;
                               }));
  if (n >= 2) {
    const DifferencePattern pattern = check_difference_pattern(n);
    report.set_check("difference_alternation", pattern.alternation);
    report.set_check("difference_negative_tail", pattern.negative_tail);
    report.set_check("difference_zero_beyond", pattern.zero_beyond);
    report.set_check("difference_antisymmetry", pattern.antisymmetry);
  }

  report.modes = conv_modes;
  report.parameters = {{"n", n},
                       {"variant", "standard"},
                       {"normalizer", to_string(normalizer(n))},
                       {"contrast", to_string(difference_contrast(n))}};
  return report;
}

VerificationReport verify_theorem1_strict(int n, int i, double min_margin) {
  ConstructionParams{n, Variant::strict_peak, i}.validate();
  VerificationReport report;
  report.n = n;

  const LatticeFunction p = build_p_strict(n, i);
  const LatticeFunction q = build_q(n);
  report.set_check("p_normalized", p.mass() == 1);
  report.set_check("p_symmetric", is_symmetric(p));
  report.set_check("p_log_concave", is_log_concave(p));
  report.set_check("p_strict_maximum_at_zero",
                   modes(p).modes == std::vector<ModeInterval>{{0, 0}});
  report.set_check("q_symmetric", is_symmetric(q));

  const LatticeFunction conv = convolve(p, q);
  const LatticeFunction standard = convolve(build_p(n), q);
  report.set_check("convolution_symmetric", is_symmetric(conv));

  bool pattern = true;
  Rational margin;
  bool first = true;
  for (Index m = -n; m < n; ++m) {
    const Rational step = conv(m + 1) - conv(m);
    pattern = pattern && sgn(step) == sgn(standard(m + 1) - standard(m));
    const Rational gap = abs(step);
    if (first || gap < margin) margin = gap;
    first = false;
  }
  const double margin_value = margin.get_d();
  report.set_check("inequality_pattern", pattern);
  report.set_check("margin", margin_value > min_margin);

  const ModeReport conv_modes = modes(conv);
  std::vector<ModeInterval> expected;
  for (Index m : predicted_mode_locations(n)) expected.push_back({m, m});
  report.set_check("mode_locations", conv_modes.modes == expected);

  report.modes = conv_modes;
  report.parameters = {{"n", n},
                       {"variant", "strict-peak"},
                       {"i", i},
                       {"margin", margin_value},
                       {"min_margin", min_margin},
                       {"support_last", p.last()}};
  return report;
}

}  // namespace modalforge
