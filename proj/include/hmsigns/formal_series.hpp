#pragma once

// Truncated formal sums  sum_m a_m M(m)  over integral ideals m with
// N(m) <= cutoff, where M(O_F) = 1 and M(ab) = M(a)M(b).
//
// Truncation contract: products drop every term whose index has norm above
// the cutoff. Because the coefficient of M(m) in a product only involves
// divisors of m, and divisors never have larger norm, the truncated
// product is exactly the truncation of the untruncated one. The truncated
// series therefore form a commutative ring on their own.

#include <cstdint>
#include <map>
#include <string>

#include "hmsigns/characters.hpp"
#include "hmsigns/field_arith.hpp"
#include "hmsigns/rational.hpp"

namespace hmsigns {

class FormalSeries {
 public:
  using Terms = std::map<IdealFactorization, Rational>;

  FormalSeries(QuadField K, std::int64_t cutoff) : field_(K), cutoff_(cutoff) {}

  static FormalSeries identity(QuadField K, std::int64_t cutoff);
  static FormalSeries monomial(QuadField K, std::int64_t cutoff, const IdealFactorization& m,
                               const Rational& coeff = 1);

  const QuadField& field() const noexcept { return field_; }
  std::int64_t cutoff() const noexcept { return cutoff_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Zero when absent.
  Rational coeff(const IdealFactorization& m) const;
  /// Indices above the cutoff are rejected; zero values erase the term.
  void set(const IdealFactorization& m, const Rational& value);
  void add(const IdealFactorization& m, const Rational& value);

  /// In place: *this *= (1 - u M(P))^{-1}, truncated. Touches only indices of
  /// norm <= cutoff / N(P), so a full Euler product costs about
  /// cutoff * log log cutoff coefficient updates.
  void mul_euler_factor_inverse(const PrimeIdeal& P, const Rational& u);
  /// In place: *this *= (1 - u M(P)).
  void mul_euler_factor(const PrimeIdeal& P, const Rational& u);

  friend bool operator==(const FormalSeries& a, const FormalSeries& b) {
    return a.field_ == b.field_ && a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
  }

 private:
  QuadField field_;
  std::int64_t cutoff_;
  Terms terms_;
};

/// Cauchy product on ideal indices. Throws FieldMismatch / CutoffMismatch.
FormalSeries series_mul(const FormalSeries& A, const FormalSeries& B);

/// Number of (a, b) in supp(A) x supp(B) with ab = m.
std::size_t contributing_pairs(const FormalSeries& A, const FormalSeries& B, const IdealFactorization& m);

/// sum_{k : N(P)^k <= X} u^k M(P^k), i.e. (1 - u M(P))^{-1} truncated.
FormalSeries euler_factor_inverse(const QuadField& K, const PrimeIdeal& P, const Rational& u, std::int64_t X);

/// 1 - u M(P).
FormalSeries euler_factor(const QuadField& K, const PrimeIdeal& P, const Rational& u, std::int64_t X);

/// lambda * prod_{P good, N(P) <= X} (1 - chi(P)/N(P) M(P))^{-1}: the candidate
/// c(m, f_tau) up to the cutoff.
FormalSeries c_series_from_lambda(const FormalSeries& lambda, const IdealCharacter& chi);

/// c * prod_{P good} (1 - chi(P)/N(P) M(P)): inverts c_series_from_lambda.
FormalSeries lambda_series_from_c(const FormalSeries& c, const IdealCharacter& chi);

/// c(P) - chi(P)/N(P) - lambda(P); zero exactly when the M(P) coefficients
/// of both sides agree. Throws NotNormalized unless c(O_F) = 1, BadPrime if
/// chi(P) = 0, InvalidArgument if N(P) exceeds the cutoff.
Rational extract_prime_relation(const FormalSeries& c, const FormalSeries& lambda, const IdealCharacter& chi,
                                const PrimeIdeal& P);

/// JSON list of {ideal: [[norm, p, root_label, exp], ...], value: "num/den"}.
std::string series_to_json(const FormalSeries& s);
FormalSeries series_from_json(const QuadField& K, std::int64_t cutoff, const std::string& json_text);

}  // namespace hmsigns
