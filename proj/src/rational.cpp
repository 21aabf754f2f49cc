#include "hmsigns/rational.hpp"

#include <cctype>
#include <cmath>

#include "hmsigns/errors.hpp"

namespace hmsigns {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquarefree: return "NotSquarefree";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorCode::NotIntegral: return "NotIntegral";
    case ErrorCode::NotTotallyPositive: return "NotTotallyPositive";
    case ErrorCode::CutoffMismatch: return "CutoffMismatch";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::BadPrime: return "BadPrime";
    case ErrorCode::HasseBoundViolated: return "HasseBoundViolated";
    case ErrorCode::MissingPrime: return "MissingPrime";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::BadReduction: return "BadReduction";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string tmp(s[0] == '+' ? s.substr(1) : s);
  return Integer(tmp, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  if (!is_integer_literal(num)) {
    throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
  }
  Rational q;
  q.get_num() = parse_integer(num);
  if (slash == std::string_view::npos) {
    q.get_den() = 1;
    return q;
  }
  const auto den = text.substr(slash + 1);
  if (!is_integer_literal(den) || den[0] == '-' || den[0] == '+') {
    throw Error(ErrorCode::ParseError, "bad denominator in '" + std::string(text) + "'");
  }
  q.get_den() = parse_integer(den);
  if (q.get_den() == 0) {
    throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  }
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string fixed_decimal(const Rational& q, int digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const Integer num = abs(q.get_num()) * scale;
  const Integer& den = q.get_den();
  Integer quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (2 * rem >= den) quot += 1;

  std::string body = quot.get_str();
  if (static_cast<int>(body.size()) <= digits) {
    body.insert(0, static_cast<std::size_t>(digits + 1) - body.size(), '0');
  }
  std::string out = body.substr(0, body.size() - static_cast<std::size_t>(digits));
  if (digits > 0) out += "." + body.substr(body.size() - static_cast<std::size_t>(digits));
  if (q < 0 && quot != 0) out.insert(0, "-");
  return out;
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, "non-finite double");
  }
  Rational q;
  mpq_set_d(q.get_mpq_t(), v);
  return q;
}

Integer floor(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

}  // namespace hmsigns
