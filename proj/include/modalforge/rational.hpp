#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace modalforge {

/// Arbitrary-precision exact rational. Always kept in canonical (reduced) form.
using Rational = mpq_class;

/// Signed index on the integer lattice.
using Index = std::int64_t;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses the output of to_string. Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

}  // namespace modalforge
