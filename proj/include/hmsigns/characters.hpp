#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "hmsigns/field_arith.hpp"

namespace hmsigns {

/// Finite table of a quadratic ideal character psi on primes; primes not
/// listed take the value +1.
using PsiTable = std::map<PrimeIdeal, int>;

/// (tau / P) for P not above 2: whether tau is a square in O_F/P, i.e. the
/// value of the quadratic character of F(sqrt tau)/F. 0 when P | tau.
int epsilon_tau(const QuadField& K, const FieldElement& tau, const PrimeIdeal& P);

/// The ideal character (psi * eps_tau)^* with values in {-1, 0, +1}.
/// It vanishes exactly on `bad_set()`, which always contains the primes
/// above 2 and the ramified primes of F, plus the primes dividing tau and
/// any extra primes (level support) supplied by the caller.
class IdealCharacter {
 public:
  /// eps_tau times psi. Throws NotTotallyPositive / NotIntegral.
  static IdealCharacter from_tau(const QuadField& K, const FieldElement& tau, PsiTable psi = {},
                                 const std::set<PrimeIdeal>& extra_bad = {});
  /// psi alone, vanishing exactly on `bad`.
  static IdealCharacter from_table(const QuadField& K, PsiTable psi, std::set<PrimeIdeal> bad);

  const QuadField& field() const noexcept { return field_; }
  const std::optional<FieldElement>& tau() const noexcept { return tau_; }
  const PsiTable& psi() const noexcept { return psi_; }
  const std::set<PrimeIdeal>& bad_set() const noexcept { return bad_; }
  bool is_bad(const PrimeIdeal& P) const { return bad_.count(P) != 0; }

  int value(const PrimeIdeal& P) const;
  int induced_value(const IdealFactorization& m) const;

  /// Same character with additional primes forced to 0.
  IdealCharacter with_bad(const std::set<PrimeIdeal>& more) const;

 private:
  IdealCharacter(QuadField K) : field_(K) {}

  QuadField field_;
  std::optional<FieldElement> tau_;
  PsiTable psi_;
  std::set<PrimeIdeal> bad_;
};

/// The bad set used for eps_tau: primes above 2, above disc, and dividing tau.
std::set<PrimeIdeal> conservative_bad_set(const QuadField& K, const FieldElement& tau);

/// JSON list of {prime_norm, rational_prime, root_label, value}.
PsiTable parse_psi_table(const QuadField& K, const std::string& json_text);
std::string psi_table_to_json(const PsiTable& psi);

}  // namespace hmsigns
