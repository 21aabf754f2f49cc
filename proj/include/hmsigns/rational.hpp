#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hmsigns {

using Integer = mpz_class;
using Rational = mpq_class;

/// Accepts "n" or "n/d" (optional sign, no spaces). Throws ParseError.
Rational parse_rational(std::string_view text);

/// num/den in canonical form; den != 0.
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Always "num/den", canonical, den > 0.
std::string to_string(const Rational& q);

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& z) { return sgn(z); }

/// Exact decimal rendering with `digits` fractional digits, rounding half
/// away from zero. Used for the CSV density columns so they are identical
/// on every platform.
std::string fixed_decimal(const Rational& q, int digits);

/// Exact binary value of a finite double.
Rational rational_from_double(double v);

/// Largest integer <= q.
Integer floor(const Rational& q);

}  // namespace hmsigns
