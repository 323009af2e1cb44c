#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "modalforge/constructions.hpp"
#include "oracles.hpp"

using namespace modalforge;

namespace {

std::vector<Rational> nonnegative_part(const LatticeFunction& f) {
  std::vector<Rational> out;
  for (Index k = 0; k <= f.last(); ++k) out.push_back(f(k));
  return out;
}

std::vector<Rational> as_rationals(const std::vector<long>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("build_p_raw is the centred indicator") {
  CHECK(build_p_raw(2) == delta(0));
  CHECK(build_p_raw(6) == box(-4, 4));
  CHECK(build_p_raw(7) == box(-5, 5));
  CHECK_THROWS_AS(build_p_raw(1), std::invalid_argument);
}

TEST_CASE("build_p is normalized, symmetric and log-concave") {
  const LatticeFunction p1 = build_p(1);
  CHECK(p1 == box(-1, 1, Rational(1, 3)));
  CHECK(build_p(6) == box(-4, 4, Rational(1, 9)));
  CHECK(build_p(2) == delta(0));
  CHECK_THROWS_AS(build_p(0), std::invalid_argument);
  for (int n = 1; n <= 20; ++n) {
    const LatticeFunction p = build_p(n);
    CHECK(p.mass() == 1);
    CHECK(is_symmetric(p));
    CHECK(is_log_concave(p));
  }
}

TEST_CASE("build_q_raw reproduces the hand-evaluated tables") {
  CHECK(nonnegative_part(build_q_raw(6)) == as_rationals(oracle::kQ6));
  CHECK(nonnegative_part(build_q_raw(7)) == as_rationals(oracle::kQ7));
  CHECK(nonnegative_part(build_q_raw(3)) == as_rationals(oracle::kQ3));
  CHECK(nonnegative_part(build_q_raw(2)) == as_rationals({1, 2}));
  CHECK(build_q_raw(1) == make_lattice(-1, {1, 0, 1}));
  CHECK(is_symmetric(build_q_raw(6)));
  CHECK(is_symmetric(build_q_raw(7)));
  CHECK_THROWS_AS(build_q_raw(0), std::invalid_argument);
}

TEST_CASE("normalizer is the total raw mass") {
  CHECK(normalizer(6) == 69);
  CHECK(normalizer(7) == 95);
  CHECK(normalizer(1) == 2);
  Rational direct = 0;
  for (const auto& [k, v] : oracle::mirrored(oracle::kQ7)) direct += v;
  CHECK(normalizer(7) == direct);
  CHECK_THROWS_AS(normalizer(0), std::invalid_argument);
}

TEST_CASE("build_q is bimodal with the stated mode locations") {
  CHECK(build_q(1) == make_lattice(-1, {Rational(1, 2), 0, Rational(1, 2)}));
  CHECK(modes(build_q(6)).modes == std::vector<ModeInterval>{{-5, -5}, {5, 5}});
  CHECK(modes(build_q(7)).modes == std::vector<ModeInterval>{{-5, -5}, {5, 5}});
  for (int n = 1; n <= 30; ++n) {
    const LatticeFunction q = build_q(n);
    const Index peak = q_mode_location(n);
    CHECK(q.mass() == 1);
    CHECK(modes(q).modes == std::vector<ModeInterval>{{-peak, -peak}, {peak, peak}});
    CHECK(q(0) < q(1));
  }
}

TEST_CASE("property: q~_n support and range for n in 2..50") {
  for (int n = 2; n <= 50; ++n) {
    const LatticeFunction q = build_q_raw(n);
    CHECK(q.first() == -(2 * n - 3));
    CHECK(q.last() == 2 * n - 3);
    for (Index k = q.first(); k <= q.last(); ++k) {
      CHECK(q(k) >= 1);
      CHECK(q(k) <= n);
      CHECK(q(k).get_den() == 1);
    }
  }
}

TEST_CASE("difference structure of p_n * q_n for n in 2..50") {
  for (int n = 2; n <= 50; ++n) {
    const DifferencePattern pattern = check_difference_pattern(n);
    CHECK_MESSAGE(pattern.holds(), "n = " << n);
  }
}

TEST_CASE("difference equals the shifted q difference over 2n - 3") {
  for (int n = 2; n <= 12; ++n) {
    const auto q = oracle::table_of(build_q(n));
    const LatticeFunction d = finite_difference(convolve(build_p(n), build_q(n)));
    for (Index m = -4 * n; m <= 4 * n; ++m) {
      const Rational expected =
          (oracle::at(q, m + n - 2) - oracle::at(q, m - n + 1)) / Rational(2 * n - 3);
      CHECK(d(m) == expected);
    }
  }
}

TEST_CASE("predicted mode locations and contrast") {
  CHECK(predicted_mode_locations(1) == std::vector<Index>{0});
  CHECK(predicted_mode_locations(6) == std::vector<Index>{-5, -3, -1, 1, 3, 5});
  CHECK(predicted_mode_locations(7) == std::vector<Index>{-6, -4, -2, 0, 2, 4, 6});
  CHECK(difference_contrast(6) == Rational(1, 621));
  CHECK(difference_contrast(1) == Rational(1, 6));
}

TEST_CASE("verify_theorem1 on the worked cases") {
  const VerificationReport r1 = verify_theorem1(1);
  CHECK(r1.passed);
  const auto& m1 = std::get<ModeReport>(r1.modes);
  CHECK(m1.modes == std::vector<ModeInterval>{{0, 0}});
  const LatticeFunction c1 = convolve(build_p(1), build_q(1));
  const auto direct = oracle::convolve(oracle::table_of(build_p(1)), oracle::table_of(build_q(1)));
  const std::vector<Rational> expected{Rational(1, 6), Rational(1, 6), Rational(1, 3),
                                       Rational(1, 6), Rational(1, 6)};
  for (Index m = -2; m <= 2; ++m) {
    CHECK(c1(m) == expected[static_cast<std::size_t>(m + 2)]);
    CHECK(oracle::at(direct, m) == expected[static_cast<std::size_t>(m + 2)]);
  }

  const VerificationReport r3 = verify_theorem1(3);
  CHECK(r3.passed);
  CHECK(std::get<ModeReport>(r3.modes).modes ==
        std::vector<ModeInterval>{{-2, -2}, {0, 0}, {2, 2}});

  const VerificationReport r6 = verify_theorem1(6);
  CHECK(r6.passed);
  CHECK(std::get<ModeReport>(r6.modes).modes ==
        std::vector<ModeInterval>{{-5, -5}, {-3, -3}, {-1, -1}, {1, 1}, {3, 3}, {5, 5}});
  CHECK(r6.checks.at("modes_are_global_maxima"));
  CHECK_THROWS_AS(verify_theorem1(0), std::invalid_argument);
}

TEST_CASE("verify_theorem1 passes for every n in 1..50") {
  for (int n = 1; n <= 50; ++n) {
    const VerificationReport r = verify_theorem1(n);
    CHECK_MESSAGE(r.passed, "n = " << n);
    CHECK(std::get<ModeReport>(r.modes).count == n);
  }
}

TEST_CASE("strict-peak values") {
  CHECK(p_strict_unnormalized(6, 1, 0) == 1.0);
  CHECK(p_strict_unnormalized(6, 1, 4) == doctest::Approx(std::exp(-std::pow(4.0 / 4.5, 2.0))));
  CHECK(p_strict_unnormalized(6, 1, 4) == doctest::Approx(0.45378).epsilon(1e-4));

  // Large exponent: flat on {-4..4}, vanishing outside.
  for (Index m = -4; m <= 4; ++m) CHECK(p_strict_unnormalized(6, 200, m) > 0.999);
  CHECK(p_strict_unnormalized(6, 200, 5) == 0.0);

  const LatticeFunction p = build_p_strict(6, 1);
  CHECK(p.mass() == 1);
  CHECK(is_symmetric(p));
  CHECK(is_log_concave(p));
  CHECK(modes(p).modes == std::vector<ModeInterval>{{0, 0}});
  // Truncated where exp(-(m/4.5)^2) < 1e-300.
  CHECK(p.last() == 118);

  CHECK_THROWS_AS(build_p_strict(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_p_strict(6, 0), std::invalid_argument);
}

TEST_CASE("strict-peak variant keeps a strict maximum for large exponents") {
  const LatticeFunction p = build_p_strict(6, 64);
  CHECK(p.first() == -4);
  CHECK(p.last() == 4);
  CHECK(p(0) > p(1));
  CHECK(p(1) > p(2));
  CHECK(is_log_concave(p));

  const VerificationReport r = verify_theorem1_strict(6, 64);
  CHECK(r.passed);
  CHECK(r.parameters.at("margin").get<double>() > 1e-9);
  CHECK(verify_theorem1_strict(3, 64).passed);
}

TEST_CASE("ConstructionParams validation") {
  CHECK_NOTHROW((ConstructionParams{1, Variant::standard, 0}.validate()));
  CHECK_THROWS_AS((ConstructionParams{0, Variant::standard, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ConstructionParams{1, Variant::strict_peak, 4}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ConstructionParams{5, Variant::strict_peak, 0}.validate()), std::invalid_argument);
}
