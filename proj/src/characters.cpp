#include "hmsigns/characters.hpp"

#include <json.hpp>

#include "hmsigns/errors.hpp"
#include "hmsigns/nt.hpp"

namespace hmsigns {

int epsilon_tau(const QuadField& K, const FieldElement& tau, const PrimeIdeal& P) {
  return quadratic_residue_symbol(K, tau, P);
}

std::set<PrimeIdeal> conservative_bad_set(const QuadField& K, const FieldElement& tau) {
  std::set<PrimeIdeal> bad;
  for (const auto& P : split_rational_prime(K, 2)) bad.insert(P);
  for (const auto& [q, e] : nt::factor(Integer(K.disc()))) {
    for (const auto& P : split_rational_prime(K, q.get_si())) bad.insert(P);
  }
  const auto tau_ideal = factor_principal_ideal(K, tau);
  for (const auto& [P, e] : tau_ideal.factors()) bad.insert(P);
  return bad;
}

IdealCharacter IdealCharacter::from_tau(const QuadField& K, const FieldElement& tau, PsiTable psi,
                                        const std::set<PrimeIdeal>& extra_bad) {
  IdealCharacter chi(K);
  chi.bad_ = conservative_bad_set(K, tau);
  chi.bad_.insert(extra_bad.begin(), extra_bad.end());
  chi.tau_ = tau;
  chi.psi_ = std::move(psi);
  for (const auto& [P, v] : chi.psi_) {
    if (v != 1 && v != -1) throw Error(ErrorCode::InvalidArgument, "psi values must be +-1");
  }
  return chi;
}

IdealCharacter IdealCharacter::from_table(const QuadField& K, PsiTable psi, std::set<PrimeIdeal> bad) {
  IdealCharacter chi(K);
  chi.psi_ = std::move(psi);
  chi.bad_ = std::move(bad);
  for (const auto& [P, v] : chi.psi_) {
    if (v != 1 && v != -1) throw Error(ErrorCode::InvalidArgument, "psi values must be +-1");
  }
  return chi;
}

int IdealCharacter::value(const PrimeIdeal& P) const {
  if (is_bad(P)) return 0;
  int v = 1;
  if (const auto it = psi_.find(P); it != psi_.end()) v = it->second;
  if (tau_) v *= epsilon_tau(field_, *tau_, P);
  return v;
}

int IdealCharacter::induced_value(const IdealFactorization& m) const {
  int v = 1;
  for (const auto& [P, e] : m.factors()) {
    const int chi = value(P);
    if (chi == 0) return 0;
    if (chi == -1 && e % 2 == 1) v = -v;
  }
  return v;
}

IdealCharacter IdealCharacter::with_bad(const std::set<PrimeIdeal>& more) const {
  IdealCharacter out = *this;
  out.bad_.insert(more.begin(), more.end());
  return out;
}

PsiTable parse_psi_table(const QuadField& K, const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("psi table: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::ParseError, "psi table: expected a JSON list");
  PsiTable psi;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& row = doc[i];
    const std::string where = "psi table entry " + std::to_string(i);
    try {
      const auto p = row.at("rational_prime").get<std::int64_t>();
      const auto label = row.at("root_label").get<int>();
      const auto norm = row.at("prime_norm").get<std::int64_t>();
      const auto value = row.at("value").get<int>();
      const PrimeIdeal P = prime_ideal(K, p, label);
      if (P.norm != norm) throw Error(ErrorCode::ParseError, where + ": prime_norm does not match the prime");
      if (value != 1 && value != -1) throw Error(ErrorCode::ParseError, where + ": value must be +-1");
      psi[P] = value;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, where + ": " + e.what());
    }
  }
  return psi;
}

std::string psi_table_to_json(const PsiTable& psi) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& [P, v] : psi) {
    doc.push_back({{"prime_norm", P.norm}, {"rational_prime", P.p}, {"root_label", P.root_label}, {"value", v}});
  }
  return doc.dump(2);
}

}  // namespace hmsigns
