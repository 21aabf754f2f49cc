#include "hmsigns/formal_series.hpp"

#include <json.hpp>

#include "hmsigns/errors.hpp"

namespace hmsigns {

FormalSeries FormalSeries::identity(QuadField K, std::int64_t cutoff) {
  return monomial(K, cutoff, IdealFactorization{}, 1);
}

FormalSeries FormalSeries::monomial(QuadField K, std::int64_t cutoff, const IdealFactorization& m,
                                    const Rational& coeff) {
  FormalSeries s(K, cutoff);
  s.set(m, coeff);
  return s;
}

Rational FormalSeries::coeff(const IdealFactorization& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void FormalSeries::set(const IdealFactorization& m, const Rational& value) {
  if (m.norm() > cutoff_) {
    throw Error(ErrorCode::InvalidArgument, "index " + to_string(m) + " exceeds the cutoff");
  }
  if (value == 0) {
    terms_.erase(m);
  } else {
    terms_[m] = value;
  }
}

void FormalSeries::add(const IdealFactorization& m, const Rational& value) {
  if (value == 0) return;
  if (m.norm() > cutoff_) {
    throw Error(ErrorCode::InvalidArgument, "index " + to_string(m) + " exceeds the cutoff");
  }
  auto [it, inserted] = terms_.try_emplace(m, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) terms_.erase(it);
  }
}

void FormalSeries::mul_euler_factor_inverse(const PrimeIdeal& P, const Rational& u) {
  if (u == 0 || P.norm > cutoff_) return;
  const std::int64_t limit = cutoff_ / P.norm;
  const auto step = IdealFactorization::prime_power(P);
  // new[mP] = old[mP] + u new[m]; ascending order makes new[m] final before
  // it is used, and inserted keys land ahead of the cursor.
  for (auto it = terms_.begin(); it != terms_.end() && it->first.norm() <= limit; ++it) {
    add(it->first * step, u * it->second);
  }
}

void FormalSeries::mul_euler_factor(const PrimeIdeal& P, const Rational& u) {
  if (u == 0 || P.norm > cutoff_) return;
  const std::int64_t limit = cutoff_ / P.norm;
  const auto step = IdealFactorization::prime_power(P);
  std::vector<Terms::iterator> low;
  for (auto it = terms_.begin(); it != terms_.end() && it->first.norm() <= limit; ++it) low.push_back(it);
  // new[mP] = old[mP] - u old[m]; descending order reads old[m] before m is updated.
  for (auto r = low.rbegin(); r != low.rend(); ++r) {
    add((*r)->first * step, -u * (*r)->second);
  }
}

namespace {

void check_compatible(const FormalSeries& A, const FormalSeries& B) {
  if (!(A.field() == B.field())) throw Error(ErrorCode::FieldMismatch, "series over different fields");
  if (A.cutoff() != B.cutoff()) throw Error(ErrorCode::CutoffMismatch, "series with different cutoffs");
}

}  // namespace

FormalSeries series_mul(const FormalSeries& A, const FormalSeries& B) {
  check_compatible(A, B);
  FormalSeries out(A.field(), A.cutoff());
  const Integer X = A.cutoff();
  // Terms are ordered by norm first, so the inner loop can stop at the
  // first index that would overflow the cutoff.
  for (const auto& [a, ca] : A.terms()) {
    for (const auto& [b, cb] : B.terms()) {
      if (a.norm() * b.norm() > X) break;
      out.add(a * b, ca * cb);
    }
  }
  return out;
}

std::size_t contributing_pairs(const FormalSeries& A, const FormalSeries& B, const IdealFactorization& m) {
  std::size_t n = 0;
  for (const auto& d : m.divisors()) {
    const IdealFactorization& a = d;
    std::vector<IdealFactorization::Factor> rest;
    for (const auto& [P, e] : m.factors()) rest.emplace_back(P, e - a.exponent(P));
    const IdealFactorization b(std::move(rest));
    if (A.terms().count(a) && B.terms().count(b)) ++n;
  }
  return n;
}

FormalSeries euler_factor_inverse(const QuadField& K, const PrimeIdeal& P, const Rational& u, std::int64_t X) {
  FormalSeries s = FormalSeries::identity(K, X);
  if (u == 0) return s;
  Rational power = 1;
  Integer norm = 1;
  for (int k = 1;; ++k) {
    norm *= P.norm;
    if (norm > X) break;
    power *= u;
    s.set(IdealFactorization::prime_power(P, k), power);
  }
  return s;
}

FormalSeries euler_factor(const QuadField& K, const PrimeIdeal& P, const Rational& u, std::int64_t X) {
  FormalSeries s = FormalSeries::identity(K, X);
  if (P.norm <= X) s.set(IdealFactorization::prime_power(P), -u);
  return s;
}

namespace {

template <class Step>
FormalSeries apply_euler_product(const FormalSeries& base, const IdealCharacter& chi, Step step) {
  if (!(base.field() == chi.field())) throw Error(ErrorCode::FieldMismatch, "character over a different field");
  FormalSeries acc = base;
  for (const auto& P : enumerate_prime_ideals(base.field(), base.cutoff())) {
    const int v = chi.value(P);
    if (v == 0) continue;
    step(acc, P, make_rational(v, P.norm));
  }
  return acc;
}

}  // namespace

FormalSeries c_series_from_lambda(const FormalSeries& lambda, const IdealCharacter& chi) {
  return apply_euler_product(lambda, chi, [](FormalSeries& s, const PrimeIdeal& P, const Rational& u) {
    s.mul_euler_factor_inverse(P, u);
  });
}

FormalSeries lambda_series_from_c(const FormalSeries& c, const IdealCharacter& chi) {
  return apply_euler_product(c, chi, [](FormalSeries& s, const PrimeIdeal& P, const Rational& u) {
    s.mul_euler_factor(P, u);
  });
}

Rational extract_prime_relation(const FormalSeries& c, const FormalSeries& lambda, const IdealCharacter& chi,
                                const PrimeIdeal& P) {
  if (c.coeff(IdealFactorization{}) != 1) {
    throw Error(ErrorCode::NotNormalized, "c(O_F) must be 1 for a primitive form");
  }
  if (P.norm > c.cutoff()) throw Error(ErrorCode::InvalidArgument, "prime beyond the cutoff");
  const int v = chi.value(P);
  if (v == 0) throw Error(ErrorCode::BadPrime, to_string(P) + " lies in the bad set");
  const auto m = IdealFactorization::prime_power(P);
  return c.coeff(m) - make_rational(v, P.norm) - lambda.coeff(m);
}

std::string series_to_json(const FormalSeries& s) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& [m, value] : s.terms()) {
    nlohmann::json ideal = nlohmann::json::array();
    for (const auto& [P, e] : m.factors()) ideal.push_back({P.norm, P.p, P.root_label, e});
    doc.push_back({{"ideal", ideal}, {"value", to_string(value)}});
  }
  return doc.dump();
}

FormalSeries series_from_json(const QuadField& K, std::int64_t cutoff, const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("series: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::ParseError, "series: expected a JSON list");
  FormalSeries s(K, cutoff);
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string where = "series term " + std::to_string(i);
    try {
      std::vector<IdealFactorization::Factor> factors;
      for (const auto& f : doc[i].at("ideal")) {
        if (!f.is_array() || f.size() != 4) throw Error(ErrorCode::ParseError, where + ": ideal factor must be [norm,p,root_label,exp]");
        const PrimeIdeal P = prime_ideal(K, f[1].get<std::int64_t>(), f[2].get<int>());
        if (P.norm != f[0].get<std::int64_t>()) throw Error(ErrorCode::ParseError, where + ": norm mismatch");
        factors.emplace_back(P, f[3].get<int>());
      }
      s.add(IdealFactorization(std::move(factors)), parse_rational(doc[i].at("value").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, where + ": " + e.what());
    }
  }
  return s;
}

}  // namespace hmsigns
