#include "hmsigns/field_arith.hpp"

#include <algorithm>
#include <map>

#include "hmsigns/errors.hpp"
#include "hmsigns/nt.hpp"

namespace hmsigns {

const std::vector<std::int64_t>& supported_fields() {
  // Q and the real quadratic fields below 100 with narrow class number 1
  // (class number 1 and a fundamental unit of norm -1).
  static const std::vector<std::int64_t> fields{1, 2, 5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97};
  return fields;
}

QuadField QuadField::make(std::int64_t d) {
  if (d < 1) throw Error(ErrorCode::NotSquarefree, "d must be a positive squarefree integer");
  for (std::int64_t q = 2; q * q <= d; ++q) {
    if (d % (q * q) == 0) throw Error(ErrorCode::NotSquarefree, std::to_string(d) + " is not squarefree");
  }
  const auto& ok = supported_fields();
  if (std::find(ok.begin(), ok.end(), d) == ok.end()) {
    throw Error(ErrorCode::UnsupportedField,
                "d = " + std::to_string(d) + " is not on the narrow-class-number-one list");
  }
  const std::int64_t disc = d == 1 ? 1 : (d % 4 == 1 ? d : 4 * d);
  return QuadField(d, disc);
}

FieldElement element_from_sqrt_form(const QuadField& K, const Rational& a, const Rational& b) {
  Rational x, y;
  if (K.is_rational()) {
    x = a + b;
    y = 0;
  } else if (K.omega_trace() == 1) {
    x = a - b;
    y = 2 * b;
  } else {
    x = a;
    y = b;
  }
  if (x.get_den() != 1 || y.get_den() != 1) {
    throw Error(ErrorCode::NotIntegral, "element is not in O_F");
  }
  return FieldElement{x.get_num(), y.get_num()};
}

std::pair<Rational, Rational> sqrt_form(const QuadField& K, const FieldElement& e) {
  if (K.omega_trace() == 1 && !K.is_rational()) {
    Rational half_y(e.y, 2);
    half_y.canonicalize();
    return {Rational(e.x) + half_y, half_y};
  }
  return {Rational(e.x), Rational(e.y)};
}

FieldElement element_mul(const QuadField& K, const FieldElement& u, const FieldElement& v) {
  const Integer yy = u.y * v.y;
  return FieldElement{u.x * v.x + K.omega_offset() * yy, u.x * v.y + u.y * v.x + K.omega_trace() * yy};
}

Integer element_norm(const QuadField& K, const FieldElement& e) {
  if (K.is_rational()) return e.x;
  return e.x * e.x + K.omega_trace() * e.x * e.y - K.omega_offset() * e.y * e.y;
}

bool is_totally_positive(const QuadField& K, const FieldElement& e) {
  if (K.is_rational()) return e.x > 0;
  const auto [a, b] = sqrt_form(K, e);
  return a > 0 && a * a > b * b * K.d();
}

std::string to_string(const QuadField& K, const FieldElement& e) {
  if (K.is_rational() || e.y == 0) return e.x.get_str();
  const auto [a, b] = sqrt_form(K, e);
  std::string out = a.get_str();
  out += (b < 0 ? "-" : "+");
  out += Rational(abs(b)).get_str() + "*sqrt(" + std::to_string(K.d()) + ")";
  return out;
}

const char* to_string(Splitting s) noexcept {
  switch (s) {
    case Splitting::SplitFirst: return "split_first";
    case Splitting::SplitSecond: return "split_second";
    case Splitting::Inert: return "inert";
    case Splitting::Ramified: return "ramified";
    case Splitting::Rational: return "rational";
  }
  return "?";
}

std::string to_string(const PrimeIdeal& P) {
  return "P[" + std::to_string(P.norm) + "," + std::to_string(P.p) + "," + std::to_string(P.root_label) + "]";
}

// --- IdealFactorization ----------------------------------------------------

IdealFactorization::IdealFactorization(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.first < b.first; });
  for (auto& [P, e] : factors) {
    if (e < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent in integral ideal");
    if (e == 0) continue;
    if (!factors_.empty() && factors_.back().first == P) {
      factors_.back().second += e;
    } else {
      factors_.emplace_back(P, e);
    }
  }
  for (const auto& [P, e] : factors_) {
    Integer pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(P.norm), static_cast<unsigned long>(e));
    norm_ *= pe;
  }
}

IdealFactorization IdealFactorization::prime_power(const PrimeIdeal& P, int e) {
  return IdealFactorization({{P, e}});
}

bool IdealFactorization::is_squarefree() const noexcept {
  return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.second == 1; });
}

int IdealFactorization::exponent(const PrimeIdeal& P) const noexcept {
  for (const auto& [Q, e] : factors_) {
    if (Q == P) return e;
  }
  return 0;
}

bool IdealFactorization::divides(const IdealFactorization& other) const noexcept {
  return std::all_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return other.exponent(f.first) >= f.second; });
}

IdealFactorization IdealFactorization::operator*(const IdealFactorization& other) const {
  std::vector<Factor> merged = factors_;
  merged.insert(merged.end(), other.factors_.begin(), other.factors_.end());
  return IdealFactorization(std::move(merged));
}

IdealFactorization IdealFactorization::pow(int e) const {
  std::vector<Factor> scaled = factors_;
  for (auto& f : scaled) f.second *= e;
  return IdealFactorization(std::move(scaled));
}

std::vector<IdealFactorization> IdealFactorization::divisors() const {
  std::vector<std::vector<Factor>> partial{{}};
  for (const auto& [P, e] : factors_) {
    std::vector<std::vector<Factor>> next;
    for (const auto& base : partial) {
      for (int k = 0; k <= e; ++k) {
        auto grown = base;
        if (k > 0) grown.emplace_back(P, k);
        next.push_back(std::move(grown));
      }
    }
    partial = std::move(next);
  }
  std::vector<IdealFactorization> out;
  out.reserve(partial.size());
  for (auto& f : partial) out.emplace_back(std::move(f));
  std::sort(out.begin(), out.end());
  return out;
}

bool operator<(const IdealFactorization& a, const IdealFactorization& b) {
  if (const int c = cmp(a.norm_, b.norm_); c != 0) return c < 0;
  return std::lexicographical_compare(
      a.factors_.begin(), a.factors_.end(), b.factors_.begin(), b.factors_.end(),
      [](const IdealFactorization::Factor& x, const IdealFactorization::Factor& y) {
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
      });
}

std::string to_string(const IdealFactorization& I) {
  if (I.is_unit()) return "(1)";
  std::string out;
  for (const auto& [P, e] : I.factors()) {
    if (!out.empty()) out += "*";
    out += to_string(P);
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

// --- primes ----------------------------------------------------------------

namespace {

std::int64_t min_poly_value(const QuadField& K, std::int64_t t, std::int64_t p) {
  const std::int64_t tt = nt::mod(static_cast<std::int64_t>(nt::mulmod(static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(p))), p);
  return nt::mod(tt - nt::mod(K.omega_trace() * t, p) - nt::mod(K.omega_offset(), p), p);
}

PrimeIdeal make_prime(std::int64_t p, int degree, Splitting s, int label, std::int64_t root) {
  PrimeIdeal P;
  P.p = p;
  P.residue_degree = degree;
  P.norm = degree == 1 ? p : p * p;
  P.splitting = s;
  P.root_label = label;
  P.root = root;
  return P;
}

}  // namespace

std::vector<PrimeIdeal> split_rational_prime(const QuadField& K, std::int64_t p) {
  if (p < 2 || !nt::is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  }
  if (K.is_rational()) return {make_prime(p, 1, Splitting::Rational, 0, -1)};

  if (K.disc() % p == 0) {
    // p divides disc <= 4*97, so a direct search for the double root is cheap.
    for (std::int64_t t = 0; t < p; ++t) {
      if (min_poly_value(K, t, p) == 0) return {make_prime(p, 1, Splitting::Ramified, 0, t)};
    }
    throw Error(ErrorCode::InvalidArgument, "no root at a ramified prime");
  }

  if (p == 2) {
    // Only reached for d = 1 (mod 4): w^2 - w - offset splits iff offset is even.
    if (K.omega_offset() % 2 == 0) {
      return {make_prime(2, 1, Splitting::SplitFirst, 1, 0), make_prime(2, 1, Splitting::SplitSecond, 2, 1)};
    }
    return {make_prime(2, 2, Splitting::Inert, 0, -1)};
  }

  if (nt::legendre(K.disc(), p) == -1) return {make_prime(p, 2, Splitting::Inert, 0, -1)};

  // roots of t^2 - trace*t - offset are (trace +- sqrt(disc))/2
  const std::int64_t r = nt::sqrt_mod(K.disc(), p);
  const auto inv2 = static_cast<std::uint64_t>((p + 1) / 2);
  const auto P = static_cast<std::uint64_t>(p);
  std::int64_t t1 = static_cast<std::int64_t>(nt::mulmod(static_cast<std::uint64_t>(nt::mod(K.omega_trace() + r, p)), inv2, P));
  std::int64_t t2 = static_cast<std::int64_t>(nt::mulmod(static_cast<std::uint64_t>(nt::mod(K.omega_trace() - r, p)), inv2, P));
  if (t1 > t2) std::swap(t1, t2);
  return {make_prime(p, 1, Splitting::SplitFirst, 1, t1), make_prime(p, 1, Splitting::SplitSecond, 2, t2)};
}

namespace {

void append_within(const QuadField& K, std::int64_t p, std::int64_t X, std::vector<PrimeIdeal>& out) {
  for (const auto& P : split_rational_prime(K, p)) {
    if (P.norm <= X) out.push_back(P);
  }
}

}  // namespace

std::vector<PrimeIdeal> enumerate_prime_ideals(const QuadField& K, std::int64_t X) {
  const auto primes = nt::primes_up_to(X);
  const auto n = static_cast<std::int64_t>(primes.size());
  std::vector<std::vector<PrimeIdeal>> slots(primes.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    append_within(K, primes[static_cast<std::size_t>(i)], X, slots[static_cast<std::size_t>(i)]);
  }
  std::vector<PrimeIdeal> out;
  out.reserve(primes.size() * 2);
  for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PrimeIdeal> reference::enumerate_prime_ideals(const QuadField& K, std::int64_t X) {
  std::vector<PrimeIdeal> out;
  for (std::int64_t p : nt::primes_up_to(X)) append_within(K, p, X, out);
  std::sort(out.begin(), out.end());
  return out;
}

PrimeIdeal prime_ideal(const QuadField& K, std::int64_t p, int root_label) {
  for (const auto& P : split_rational_prime(K, p)) {
    if (P.root_label == root_label) return P;
  }
  throw Error(ErrorCode::InvalidArgument,
              "no prime above " + std::to_string(p) + " with root label " + std::to_string(root_label));
}

std::int64_t residue_of(const QuadField& K, const FieldElement& e, const PrimeIdeal& P) {
  if (P.residue_degree != 1) throw Error(ErrorCode::InvalidArgument, "residue_of needs a degree-one prime");
  if (K.is_rational()) return nt::mod(e.x, P.p);
  const auto p = static_cast<std::uint64_t>(P.p);
  const auto y = static_cast<std::uint64_t>(nt::mod(e.y, P.p));
  return nt::mod(nt::mod(e.x, P.p) + static_cast<std::int64_t>(nt::mulmod(y, static_cast<std::uint64_t>(P.root), p)), P.p);
}

namespace {

// Arithmetic in F_p[w]/(w^2 - trace*w - offset).
struct QuadResidue {
  std::uint64_t u, v;  // u + v*w
};

QuadResidue mul(QuadResidue a, QuadResidue b, std::uint64_t trace, std::uint64_t offset, std::uint64_t p) {
  const std::uint64_t vv = nt::mulmod(a.v, b.v, p);
  const std::uint64_t u = (nt::mulmod(a.u, b.u, p) + nt::mulmod(vv, offset, p)) % p;
  const std::uint64_t v = (nt::mulmod(a.u, b.v, p) + nt::mulmod(a.v, b.u, p) + nt::mulmod(vv, trace, p)) % p;
  return {u, v};
}

}  // namespace

int quadratic_residue_symbol(const QuadField& K, const FieldElement& e, const PrimeIdeal& P) {
  if (P.p == 2) throw Error(ErrorCode::EvenCharacteristic, "residue symbol at a prime above 2");
  if (P.residue_degree == 1) return nt::legendre(residue_of(K, e, P), P.p);

  const auto p = static_cast<std::uint64_t>(P.p);
  const auto trace = static_cast<std::uint64_t>(nt::mod(K.omega_trace(), P.p));
  const auto offset = static_cast<std::uint64_t>(nt::mod(K.omega_offset(), P.p));
  QuadResidue base{static_cast<std::uint64_t>(nt::mod(e.x, P.p)), static_cast<std::uint64_t>(nt::mod(e.y, P.p))};
  if (base.u == 0 && base.v == 0) return 0;
  std::uint64_t exp = (p * p - 1) / 2;
  QuadResidue acc{1, 0};
  while (exp > 0) {
    if (exp & 1) acc = mul(acc, base, trace, offset, p);
    base = mul(base, base, trace, offset, p);
    exp >>= 1;
  }
  if (acc.v == 0 && acc.u == 1) return 1;
  if (acc.v == 0 && acc.u == p - 1) return -1;
  throw Error(ErrorCode::InvalidArgument, "Euler criterion did not land on +-1; bad residue field");
}

int quadratic_residue_symbol(const QuadField& K, const Integer& a, const PrimeIdeal& P) {
  return quadratic_residue_symbol(K, FieldElement{a, 0}, P);
}

// --- factorization of principal ideals ------------------------------------

IdealFactorization factor_principal_ideal(const QuadField& K, const FieldElement& tau) {
  if (!is_totally_positive(K, tau)) throw Error(ErrorCode::NotTotallyPositive, to_string(K, tau));
  const Integer norm = abs(element_norm(K, tau));
  std::vector<IdealFactorization::Factor> factors;
  for (const auto& [q, v] : nt::factor(norm)) {
    if (!q.fits_slong_p()) throw Error(ErrorCode::InvalidArgument, "prime factor too large");
    const std::int64_t p = q.get_si();
    const auto above = split_rational_prime(K, p);
    const PrimeIdeal& first = above.front();
    switch (first.splitting) {
      case Splitting::Rational:
      case Splitting::Ramified:
        factors.emplace_back(first, v);
        break;
      case Splitting::Inert:
        factors.emplace_back(first, v / 2);
        break;
      case Splitting::SplitFirst:
      case Splitting::SplitSecond: {
        // tau = p^g tau' with p not dividing tau'; then at most one of the two
        // primes divides tau', and it carries the rest of v_p(N(tau)).
        const int g = std::min(tau.x == 0 ? v : nt::valuation(tau.x, p), tau.y == 0 ? v : nt::valuation(tau.y, p));
        Integer pg;
        mpz_ui_pow_ui(pg.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(g));
        const FieldElement rest{tau.x / pg, tau.y / pg};
        const int remaining = v - 2 * g;
        for (const auto& P : above) {
          int e = g;
          if (remaining > 0 && residue_of(K, rest, P) == 0) e += remaining;
          factors.emplace_back(P, e);
        }
        break;
      }
    }
  }
  IdealFactorization out(std::move(factors));
  if (out.norm() != norm) throw Error(ErrorCode::InvalidArgument, "factorization norm check failed");
  return out;
}

IdealFactorization factor_principal_ideal(const QuadField& K, const Rational& a, const Rational& b) {
  return factor_principal_ideal(K, element_from_sqrt_form(K, a, b));
}

SquarefreeDecomposition squarefree_decompose(const IdealFactorization& I) {
  std::vector<IdealFactorization::Factor> a, r;
  for (const auto& [P, e] : I.factors()) {
    if (e / 2 > 0) a.emplace_back(P, e / 2);
    if (e % 2 == 1) r.emplace_back(P, 1);
  }
  return {IdealFactorization(std::move(a)), IdealFactorization(std::move(r))};
}

}  // namespace hmsigns
