#pragma once

// Integral ideals of Q and of real quadratic fields Q(sqrt d) with narrow
// class number one. Elements are held in the integral basis {1, w} where
//   w = (1 + sqrt d)/2  if d = 1 (mod 4),   w = sqrt d  otherwise,
// so w^2 = trace*w + offset with (trace, offset) = (1, (d-1)/4) or (0, d).
// All arithmetic here is exact.

#include <compare>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hmsigns/rational.hpp"

namespace hmsigns {

class QuadField {
 public:
  /// Throws NotSquarefree or UnsupportedField. d = 1 gives Q itself.
  static QuadField make(std::int64_t d);

  std::int64_t d() const noexcept { return d_; }
  std::int64_t disc() const noexcept { return disc_; }
  int degree() const noexcept { return d_ == 1 ? 1 : 2; }
  bool is_rational() const noexcept { return d_ == 1; }

  std::int64_t omega_trace() const noexcept { return d_ % 4 == 1 ? 1 : 0; }
  std::int64_t omega_offset() const noexcept { return d_ % 4 == 1 ? (d_ - 1) / 4 : d_; }

  friend bool operator==(const QuadField&, const QuadField&) = default;

 private:
  QuadField(std::int64_t d, std::int64_t disc) : d_(d), disc_(disc) {}
  std::int64_t d_ = 1;
  std::int64_t disc_ = 1;
};

/// The d accepted by QuadField::make.
const std::vector<std::int64_t>& supported_fields();

/// x + y*w in the integral basis. Over Q, y is always 0.
struct FieldElement {
  Integer x;
  Integer y;
  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

/// a + b*sqrt(d) -> integral basis. Throws NotIntegral.
FieldElement element_from_sqrt_form(const QuadField& K, const Rational& a, const Rational& b);
std::pair<Rational, Rational> sqrt_form(const QuadField& K, const FieldElement& e);
FieldElement element_mul(const QuadField& K, const FieldElement& u, const FieldElement& v);
Integer element_norm(const QuadField& K, const FieldElement& e);
bool is_totally_positive(const QuadField& K, const FieldElement& e);
std::string to_string(const QuadField& K, const FieldElement& e);

enum class Splitting { SplitFirst, SplitSecond, Inert, Ramified, Rational };

const char* to_string(Splitting s) noexcept;

/// A nonzero prime of O_F. `root` is the image of w in the residue field
/// for degree-one primes (-1 for inert primes and for primes of Q).
/// `root_label` is 1/2 for the smaller/larger root of a split prime and 0
/// when the prime is the only one above p.
struct PrimeIdeal {
  std::int64_t p = 0;
  int residue_degree = 1;
  std::int64_t norm = 0;
  Splitting splitting = Splitting::Rational;
  int root_label = 0;
  std::int64_t root = -1;

  auto key() const noexcept { return std::tuple(norm, p, root_label); }
  friend bool operator==(const PrimeIdeal& a, const PrimeIdeal& b) noexcept { return a.key() == b.key(); }
  friend auto operator<=>(const PrimeIdeal& a, const PrimeIdeal& b) noexcept { return a.key() <=> b.key(); }
};

std::string to_string(const PrimeIdeal& P);

/// prod P^e, canonical: factors sorted by (norm, p, root_label), exponents > 0.
class IdealFactorization {
 public:
  using Factor = std::pair<PrimeIdeal, int>;

  IdealFactorization() = default;
  explicit IdealFactorization(std::vector<Factor> factors);
  static IdealFactorization prime_power(const PrimeIdeal& P, int e = 1);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  const Integer& norm() const noexcept { return norm_; }
  bool is_unit() const noexcept { return factors_.empty(); }
  bool is_squarefree() const noexcept;
  bool is_prime() const noexcept { return factors_.size() == 1 && factors_[0].second == 1; }
  int exponent(const PrimeIdeal& P) const noexcept;
  bool divides(const IdealFactorization& other) const noexcept;

  IdealFactorization operator*(const IdealFactorization& other) const;
  IdealFactorization pow(int e) const;
  /// All integral divisors, ascending in the canonical order.
  std::vector<IdealFactorization> divisors() const;

  friend bool operator==(const IdealFactorization& a, const IdealFactorization& b) {
    return a.factors_ == b.factors_;
  }
  friend bool operator<(const IdealFactorization& a, const IdealFactorization& b);

 private:
  std::vector<Factor> factors_;
  Integer norm_ = 1;
};

std::string to_string(const IdealFactorization& I);

struct SquarefreeDecomposition {
  IdealFactorization a;
  IdealFactorization r;
};

/// Primes above p (one or two). Throws InvalidArgument if p is not prime.
std::vector<PrimeIdeal> split_rational_prime(const QuadField& K, std::int64_t p);

/// All prime ideals of norm <= X in canonical order. OpenMP over rational
/// primes; the result does not depend on the thread count.
std::vector<PrimeIdeal> enumerate_prime_ideals(const QuadField& K, std::int64_t X);

/// Looks up the prime above p with the given root label.
PrimeIdeal prime_ideal(const QuadField& K, std::int64_t p, int root_label);

/// Image of e in O_F/P = F_p for a degree-one P.
std::int64_t residue_of(const QuadField& K, const FieldElement& e, const PrimeIdeal& P);

/// Euler criterion in O_F/P: 0 if e = 0 there, +1 for a nonzero square,
/// -1 otherwise. Inert P use F_p[w]/(w^2 - trace*w - offset).
/// Throws EvenCharacteristic for P above 2.
int quadratic_residue_symbol(const QuadField& K, const FieldElement& e, const PrimeIdeal& P);
int quadratic_residue_symbol(const QuadField& K, const Integer& a, const PrimeIdeal& P);

/// v_P(tau) for every P | tau O_F. Throws NotIntegral / NotTotallyPositive.
IdealFactorization factor_principal_ideal(const QuadField& K, const FieldElement& tau);
IdealFactorization factor_principal_ideal(const QuadField& K, const Rational& a, const Rational& b);

/// I = a^2 r with r squarefree.
SquarefreeDecomposition squarefree_decompose(const IdealFactorization& I);

namespace reference {

/// Serial enumeration; kept to check the parallel kernel.
std::vector<PrimeIdeal> enumerate_prime_ideals(const QuadField& K, std::int64_t X);

}  // namespace reference

}  // namespace hmsigns
