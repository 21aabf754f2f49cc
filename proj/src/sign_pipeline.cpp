#include "hmsigns/sign_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <json.hpp>

#include "hmsigns/errors.hpp"

namespace hmsigns {

EigenvalueSeries::EigenvalueSeries(QuadField K, std::vector<int> weight, std::string label)
    : field_(K), weight_(std::move(weight)), label_(std::move(label)) {
  if (weight_.empty()) throw Error(ErrorCode::ValidationError, "empty weight vector");
  for (int k : weight_) {
    if (k < 2 || k % 2 != 0) {
      throw Error(ErrorCode::ValidationError, "weight component " + std::to_string(k) + " is not even and >= 2");
    }
  }
  k0_ = *std::max_element(weight_.begin(), weight_.end());
}

namespace {

bool within_bound(const Rational& c, std::int64_t norm) { return c * c * norm <= 4; }

}  // namespace

void EigenvalueSeries::insert(const PrimeIdeal& P, const Rational& c) {
  if (!within_bound(c, P.norm)) {
    throw Error(ErrorCode::ValidationError,
                "|B| > 1 at " + to_string(P) + " (c = " + to_string(c) + "): corrupt eigenvalue data");
  }
  entries_[P] = c;
}

const Rational* EigenvalueSeries::find(const PrimeIdeal& P) const {
  const auto it = entries_.find(P);
  return it == entries_.end() ? nullptr : &it->second;
}

void EigenvalueSeries::validate() const {
  for (int k : weight_) {
    if (k < 2 || k % 2 != 0) throw Error(ErrorCode::ValidationError, "odd or small weight component");
  }
  if (omega_ != 0) throw Error(ErrorCode::ValidationError, "omega must be 0");
  for (const auto& [P, c] : entries_) {
    if (!within_bound(c, P.norm)) throw Error(ErrorCode::ValidationError, "|B| > 1 at " + to_string(P));
  }
}

Rational hecke_eigenvalue(const Rational& c, std::int64_t norm) { return c * norm; }

namespace {

Integer ipow(std::int64_t base, int e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return out;
}

}  // namespace

Rational renormalize_C(const Rational& c, std::int64_t norm, int k0) {
  if (k0 < 2 || k0 % 2 != 0) throw Error(ErrorCode::InvalidArgument, "k0 must be even and >= 2");
  return c * Rational(ipow(norm, k0 / 2));
}

double sato_tate_coordinate(const Rational& C, std::int64_t norm, int k0) {
  if (k0 < 2 || k0 % 2 != 0) throw Error(ErrorCode::InvalidArgument, "k0 must be even and >= 2");
  if (C * C > Rational(4 * ipow(norm, k0 - 1))) {
    throw Error(ErrorCode::HasseBoundViolated, "C = " + to_string(C) + " at norm " + std::to_string(norm));
  }
  // B = C / (2 N^{(k0-1)/2}) = (C / N^{k0/2}) * sqrt(N) / 2
  const Rational c = C / Rational(ipow(norm, k0 / 2));
  return c.get_d() * std::sqrt(static_cast<double>(norm)) / 2.0;
}

Rational lambda_value(const Rational& c, int chi, std::int64_t norm) { return c - make_rational(chi, norm); }

int lambda_sign(const Rational& c, int chi, std::int64_t norm) { return sgn(lambda_value(c, chi, norm)); }

// --- profiles ----------------------------------------------------------------

namespace {

PrimeRecord classify(const EigenvalueSeries& E, const IdealCharacter& chi, const PrimeIdeal& P) {
  PrimeRecord r;
  r.prime = P;
  r.chi = chi.value(P);
  r.good = r.chi != 0 && E.level_support().count(P) == 0;
  const Rational* c = E.find(P);
  if (c == nullptr) {
    if (r.good) throw Error(ErrorCode::MissingPrime, "no eigenvalue at " + to_string(P));
    return r;
  }
  r.c_sign = sgn(*c);
  r.b_squared = (*c) * (*c) * P.norm / 4;
  r.b = c->get_d() * std::sqrt(static_cast<double>(P.norm)) / 2.0;
  if (r.good) r.lambda_sign = lambda_sign(*c, r.chi, P.norm);
  return r;
}

void check_field(const EigenvalueSeries& E, const IdealCharacter& chi) {
  if (!(E.field() == chi.field())) throw Error(ErrorCode::FieldMismatch, "series and character over different fields");
}

}  // namespace

SignProfile build_sign_profile(const EigenvalueSeries& E, const IdealCharacter& chi, std::int64_t x) {
  check_field(E, chi);
  const auto primes = enumerate_prime_ideals(E.field(), x);
  SignProfile out{E.field(), x, std::vector<PrimeRecord>(primes.size())};
  const auto n = static_cast<std::int64_t>(primes.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out.records[static_cast<std::size_t>(i)] = classify(E, chi, primes[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(hmsigns_profile_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

SignProfile reference::build_sign_profile(const EigenvalueSeries& E, const IdealCharacter& chi, std::int64_t x) {
  check_field(E, chi);
  SignProfile out{E.field(), x, {}};
  for (const auto& P : hmsigns::reference::enumerate_prime_ideals(E.field(), x)) {
    out.records.push_back(classify(E, chi, P));
  }
  return out;
}

SignTally tally_from_profile(const SignProfile& profile, std::int64_t x) {
  if (x > profile.x) throw Error(ErrorCode::InvalidArgument, "tally cutoff beyond the profile");
  SignTally t;
  t.x = x;
  int last_sign = 0;
  for (const auto& r : profile.records) {
    if (r.prime.norm > x) break;
    ++t.pi_x;
    if (!r.good) continue;
    ++t.total;
    switch (r.lambda_sign) {
      case 1: ++t.pos; break;
      case -1: ++t.neg; break;
      default: ++t.zero; break;
    }
    if (r.lambda_sign != 0) {
      if (last_sign != 0 && r.lambda_sign != last_sign) ++t.sign_changes;
      last_sign = r.lambda_sign;
    }
  }
  return t;
}

IdealCharacter sign_character(const EigenvalueSeries& E, const FieldElement& tau, const PsiTable& psi) {
  return IdealCharacter::from_tau(E.field(), tau, psi, E.level_support());
}

SignTally tally_signs(const EigenvalueSeries& E, const IdealCharacter& chi, std::int64_t x) {
  SignTally t = tally_from_profile(build_sign_profile(E, chi, x), x);
  if (chi.tau()) {
    t.tau = to_string(E.field(), *chi.tau());
    t.a_ideal = squarefree_decompose(factor_principal_ideal(E.field(), *chi.tau())).a;
  }
  return t;
}

SignTally tally_signs(const EigenvalueSeries& E, const FieldElement& tau, const PsiTable& psi, std::int64_t x) {
  return tally_signs(E, sign_character(E, tau, psi), x);
}

CutoffCheck epsilon_cutoff_check(const SignProfile& profile, std::int64_t x, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  if (x > profile.x) throw Error(ErrorCode::InvalidArgument, "cutoff beyond the profile");
  const Rational e = rational_from_double(eps);
  const Rational e2 = e * e;
  const Integer bound = floor(Rational(1) / (4 * e2));

  CutoffCheck out;
  Integer pi_small = 0;
  Integer pos = 0;
  Integer above = 0;
  for (const auto& r : profile.records) {
    if (bound >= r.prime.norm) ++pi_small;
    if (r.prime.norm > x) continue;
    if (!r.good) continue;
    if (r.lambda_sign > 0) ++pos;
    if (r.c_sign <= 0) continue;
    // B > eps, decided in double away from the boundary and exactly near it
    bool b_above;
    if (r.b > eps * (1 + 1e-9)) {
      b_above = true;
    } else if (r.b < eps * (1 - 1e-9)) {
      b_above = false;
    } else {
      b_above = r.b_squared > e2;
    }
    if (b_above) ++above;
  }
  out.lhs_lower_bound = bound > profile.x;
  out.lhs = pos + pi_small;
  out.rhs = above;
  out.holds = out.lhs >= out.rhs;
  return out;
}

CutoffCheck epsilon_cutoff_check(const EigenvalueSeries& E, const FieldElement& tau, const PsiTable& psi,
                                 std::int64_t x, double eps) {
  return epsilon_cutoff_check(build_sign_profile(E, sign_character(E, tau, psi), x), x, eps);
}

std::string tally_csv_header() { return "x,total,pos,neg,zero,pos_density,pi_x"; }

std::string tally_csv_row(const SignTally& t) {
  return std::to_string(t.x) + "," + std::to_string(t.total) + "," + std::to_string(t.pos) + "," +
         std::to_string(t.neg) + "," + std::to_string(t.zero) + "," + fixed_decimal(t.pos_density(), 12) + "," +
         std::to_string(t.pi_x);
}

std::string tally_to_json(const SignTally& t) {
  nlohmann::json doc{
      {"x", t.x},
      {"total", t.total},
      {"pos", t.pos},
      {"neg", t.neg},
      {"zero", t.zero},
      {"pi_x", t.pi_x},
      {"sign_changes", t.sign_changes},
      {"pos_density", fixed_decimal(t.pos_density(), 12)},
      {"neg_density", fixed_decimal(t.neg_density(), 12)},
      {"zero_density", fixed_decimal(t.zero_density(), 12)},
      {"pos_density_exact", to_string(t.pos_density())},
      {"tau", t.tau},
      {"a_ideal", to_string(t.a_ideal)},
  };
  return doc.dump(2);
}

}  // namespace hmsigns
