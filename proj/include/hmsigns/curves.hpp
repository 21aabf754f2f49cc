#pragma once

// Elliptic curves over Q as a source of genuine weight-2 eigenvalue data:
// a_p = p + 1 - #E(F_p), stored as c(p) = a_p / p so that the Hecke
// eigenvalue c(p) * p gives back a_p.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmsigns/rational.hpp"
#include "hmsigns/sign_pipeline.hpp"

namespace hmsigns {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
struct CurveSpec {
  std::int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  std::string label;
  bool cm = false;  // metadata only
};

Integer discriminant(const CurveSpec& E);

/// Throws ValidationError on a singular model.
void validate_curve(const CurveSpec& E);

/// Known curves by Cremona label ("11a1", "37a1", ...). Also accepts the
/// short forms "11a", "37a".
std::optional<CurveSpec> builtin_curve(const std::string& label);
std::vector<CurveSpec> builtin_curves();

/// Parses "a1,a2,a3,a4,a6". Throws ParseError.
CurveSpec parse_curve_coefficients(const std::string& text, std::string label = "custom");

/// #E(F_p) including the point at infinity, by trying every (x, y).
std::int64_t count_points_naive(const CurveSpec& E, std::int64_t p);

/// #E(F_p) for odd p after completing the square:
///   (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6,
/// so #E = 1 + sum_x (1 + (rhs(x) / p)).
std::int64_t count_points_residue(const CurveSpec& E, std::int64_t p);

/// a_p for a prime of good reduction: naive count for p <= 64, residue sum
/// above. Throws BadReduction; a Hasse violation is a logic error.
std::int64_t ap_oracle(const CurveSpec& E, std::int64_t p);

bool has_good_reduction(const CurveSpec& E, std::int64_t p);

/// a_p for each prime in `primes` (all of good reduction), OpenMP over
/// primes with an incremental residue-sum kernel.
std::vector<std::int64_t> ap_table(const CurveSpec& E, std::span<const std::int64_t> primes);

/// Weight-2 series over Q for all p <= X: c = a_p / p at good primes, bad
/// primes recorded as level support.
EigenvalueSeries series_from_curve(const CurveSpec& E, std::int64_t X);

namespace reference {

/// Serial a_p table through ap_oracle.
std::vector<std::int64_t> ap_table(const CurveSpec& E, std::span<const std::int64_t> primes);

}  // namespace reference

}  // namespace hmsigns
