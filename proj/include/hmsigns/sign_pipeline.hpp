#pragma once

// From integral-weight eigenvalue data c(P, f) to the signs of the
// half-integral-weight coefficients lambda_g(tau, a^{-1} P), through
//
//   c(P, f_tau) - chi(P)/N(P) = lambda_g(tau, a^{-1} P),   chi = (psi eps_tau)^*.
//
// Normalizations used throughout (k0 = largest weight component):
//   Hecke eigenvalue      lambda_P = c N
//   renormalized          C = c N^{k0/2}
//   Sato-Tate coordinate  B = C / (2 N^{(k0-1)/2}) = c sqrt(N) / 2,  in [-1, 1].
// Signs are always decided on exact rationals.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hmsigns/characters.hpp"
#include "hmsigns/field_arith.hpp"
#include "hmsigns/rational.hpp"

namespace hmsigns {

class EigenvalueSeries {
 public:
  /// Throws ValidationError unless every weight component is even and >= 2.
  EigenvalueSeries(QuadField K, std::vector<int> weight, std::string label);

  const QuadField& field() const noexcept { return field_; }
  const std::vector<int>& weight() const noexcept { return weight_; }
  int k0() const noexcept { return k0_; }
  const std::string& label() const noexcept { return label_; }
  const Rational& omega() const noexcept { return omega_; }
  const std::map<PrimeIdeal, Rational>& entries() const noexcept { return entries_; }
  /// Primes dividing the level; excluded from every numerator.
  const std::set<PrimeIdeal>& level_support() const noexcept { return level_; }

  /// Throws ValidationError if |B(P)| > 1, i.e. c^2 N(P) > 4.
  void insert(const PrimeIdeal& P, const Rational& c);
  void add_level_prime(const PrimeIdeal& P) { level_.insert(P); }
  const Rational* find(const PrimeIdeal& P) const;

  /// Re-checks every invariant (weights, omega, bound on all entries).
  void validate() const;

  friend bool operator==(const EigenvalueSeries&, const EigenvalueSeries&) = default;

 private:
  QuadField field_;
  std::vector<int> weight_;
  int k0_ = 2;
  std::string label_;
  Rational omega_ = 0;
  std::map<PrimeIdeal, Rational> entries_;
  std::set<PrimeIdeal> level_;
};

Rational hecke_eigenvalue(const Rational& c, std::int64_t norm);
Rational renormalize_C(const Rational& c, std::int64_t norm, int k0);
/// Throws HasseBoundViolated when C^2 > 4 N^{k0-1}.
double sato_tate_coordinate(const Rational& C, std::int64_t norm, int k0);
/// Exact c - chi/N.
Rational lambda_value(const Rational& c, int chi, std::int64_t norm);
int lambda_sign(const Rational& c, int chi, std::int64_t norm);

/// Per-prime classification shared by the tally and the cutoff diagnostic.
struct PrimeRecord {
  PrimeIdeal prime;
  bool good = false;     // off the bad set and the level support
  int chi = 0;
  int lambda_sign = 0;   // meaningful only when good
  int c_sign = 0;
  Rational b_squared;    // B(P)^2 = c^2 N / 4, exact
  double b = 0.0;
};

struct SignProfile {
  QuadField field;
  std::int64_t x = 0;
  std::vector<PrimeRecord> records;  // every prime of norm <= x, canonical order
};

/// OpenMP over primes. Throws MissingPrime if a good prime has no entry.
SignProfile build_sign_profile(const EigenvalueSeries& E, const IdealCharacter& chi, std::int64_t x);

struct SignTally {
  std::int64_t x = 0;
  std::int64_t pos = 0;
  std::int64_t neg = 0;
  std::int64_t zero = 0;
  std::int64_t total = 0;   // good primes of norm <= x; pos + neg + zero
  std::int64_t pi_x = 0;    // all primes of norm <= x (density denominator)
  std::int64_t sign_changes = 0;
  std::string tau;
  IdealFactorization a_ideal;

  Rational pos_density() const { return pi_x == 0 ? Rational(0) : Rational(pos, pi_x); }
  Rational neg_density() const { return pi_x == 0 ? Rational(0) : Rational(neg, pi_x); }
  Rational zero_density() const { return pi_x == 0 ? Rational(0) : Rational(zero, pi_x); }
};

/// Tally over the primes of norm <= x in an existing profile (x <= profile.x).
SignTally tally_from_profile(const SignProfile& profile, std::int64_t x);

/// chi = (psi eps_tau)^* with the level support of E added to its bad set.
SignTally tally_signs(const EigenvalueSeries& E, const FieldElement& tau, const PsiTable& psi, std::int64_t x);
SignTally tally_signs(const EigenvalueSeries& E, const IdealCharacter& chi, std::int64_t x);

/// The character used by tally_signs for (E, tau, psi).
IdealCharacter sign_character(const EigenvalueSeries& E, const FieldElement& tau, const PsiTable& psi);

struct CutoffCheck {
  Integer lhs;  // pi_{>0}(x) + pi(1/(4 eps^2))
  Integer rhs;  // #{good P : N(P) <= x, B(P) > eps}
  bool holds = false;
  /// 1/(4 eps^2) exceeded the profile range, so pi() there was replaced by
  /// pi(profile.x); lhs is then a lower bound and `holds` is still sound.
  bool lhs_lower_bound = false;
};

/// Requires eps > 0 and x <= profile.x.
CutoffCheck epsilon_cutoff_check(const SignProfile& profile, std::int64_t x, double eps);
CutoffCheck epsilon_cutoff_check(const EigenvalueSeries& E, const FieldElement& tau, const PsiTable& psi,
                                 std::int64_t x, double eps);

/// CSV header and row: x,total,pos,neg,zero,pos_density,pi_x
std::string tally_csv_header();
std::string tally_csv_row(const SignTally& t);
std::string tally_to_json(const SignTally& t);

namespace reference {

SignProfile build_sign_profile(const EigenvalueSeries& E, const IdealCharacter& chi, std::int64_t x);

}  // namespace reference

}  // namespace hmsigns
