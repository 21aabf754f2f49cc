#include "hmsigns/lmfdb.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "hmsigns/eigen_file.hpp"
#include "hmsigns/errors.hpp"
#include "hmsigns/nt.hpp"

namespace hmsigns {

using nlohmann::json;

Normalization parse_normalization(const std::string& text) {
  if (text == "arithmetic") return Normalization::Arithmetic;
  if (text == "coefficient") return Normalization::Coefficient;
  throw Error(ErrorCode::InvalidArgument, "normalization must be 'arithmetic' or 'coefficient'");
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("HMSIGNS_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return ".hmsigns-cache";
}

std::string cache_key(const std::string& label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

namespace {

const json& first_record(const json& doc, const std::string& what) {
  if (doc.is_object() && doc.contains("data") && doc["data"].is_array() && !doc["data"].empty()) {
    return doc["data"][0];
  }
  if (doc.is_array() && !doc.empty()) return doc[0];
  if (doc.is_object() && !doc.contains("data")) return doc;
  throw Error(ErrorCode::ParseError, what + ": no record in response");
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, what + ": malformed JSON at byte " + std::to_string(e.byte));
  }
}

std::string strip_spaces(std::string s) {
  std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
  return s;
}

std::vector<std::int64_t> parse_int_list(const json& v, const std::string& what) {
  if (v.is_array()) return v.get<std::vector<std::int64_t>>();
  if (v.is_string()) return parse_json(v.get<std::string>(), what).get<std::vector<std::int64_t>>();
  throw Error(ErrorCode::ParseError, what + ": expected a list");
}

// "a*w+b", "-w+3", "2", "w" -> b + a*w
FieldElement parse_linear_in_w(const std::string& text) {
  const std::string s = strip_spaces(text);
  Integer x = 0, y = 0;
  std::size_t i = 0;
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty generator");
  while (i < s.size()) {
    int sgn = 1;
    if (s[i] == '+' || s[i] == '-') {
      sgn = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    const std::string term = s.substr(i, j - i);
    if (term.empty()) throw Error(ErrorCode::ParseError, "bad generator '" + text + "'");
    if (term.back() == 'w') {
      std::string coeff = term.substr(0, term.size() - 1);
      if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
      y += sgn * (coeff.empty() ? Integer(1) : parse_rational(coeff).get_num());
    } else {
      const Rational q = parse_rational(term);
      if (q.get_den() != 1) throw Error(ErrorCode::ParseError, "bad generator '" + text + "'");
      x += sgn * q.get_num();
    }
    i = j;
  }
  return {x, y};
}

PrimeIdeal identify_prime(const QuadField& K, const std::string& text) {
  // "[norm, p, generator]"
  std::string s = strip_spaces(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw Error(ErrorCode::ParseError, "bad prime '" + text + "'");
  s = s.substr(1, s.size() - 2);
  const auto c1 = s.find(',');
  const auto c2 = s.find(',', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) throw Error(ErrorCode::ParseError, "bad prime '" + text + "'");
  const std::int64_t norm = std::stoll(s.substr(0, c1));
  const std::int64_t p = std::stoll(s.substr(c1 + 1, c2 - c1 - 1));
  const FieldElement gen = parse_linear_in_w(s.substr(c2 + 1));

  const auto above = split_rational_prime(K, p);
  if (abs(element_norm(K, gen)) != norm) {
    throw Error(ErrorCode::ValidationError, "generator of '" + text + "' has the wrong norm; basis mismatch");
  }
  if (above.size() == 1) {
    if (above[0].norm != norm) throw Error(ErrorCode::ValidationError, "norm mismatch for '" + text + "'");
    return above[0];
  }
  const PrimeIdeal* match = nullptr;
  for (const auto& P : above) {
    if (residue_of(K, gen, P) == 0) {
      if (match != nullptr) throw Error(ErrorCode::ValidationError, "generator lies in both primes of '" + text + "'");
      match = &P;
    }
  }
  if (match == nullptr) throw Error(ErrorCode::ValidationError, "generator of '" + text + "' lies in no prime above p");
  return *match;
}

std::int64_t d_from_field_label(const std::string& label) {
  // "n.r.D.i"
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= label.size(); ++i) {
    if (i == label.size() || label[i] == '.') {
      parts.push_back(label.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 4) throw Error(ErrorCode::ParseError, "bad field label '" + label + "'");
  const std::int64_t degree = std::stoll(parts[0]);
  const std::int64_t D = std::stoll(parts[2]);
  if (degree == 1) return 1;
  if (degree != 2 || parts[1] != "2") throw Error(ErrorCode::ValidationError, "only Q and real quadratic fields");
  return D % 4 == 0 ? D / 4 : D;
}

Integer ipow(std::int64_t base, int e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return out;
}

}  // namespace

EigenvalueSeries series_from_lmfdb(const std::string& form_json, const std::string& field_json,
                                   Normalization normalization) {
  const json form_doc = parse_json(form_json, "hmf_forms");
  const json field_doc = parse_json(field_json, "hmf_fields");
  const json& form = first_record(form_doc, "hmf_forms");
  const json& field = first_record(field_doc, "hmf_fields");
  try {
    const std::string field_label = form.at("field_label").get<std::string>();
    if (field.contains("label") && field.at("label").get<std::string>() != field_label) {
      throw Error(ErrorCode::ValidationError, "field record does not match the form's field");
    }
    const QuadField K = QuadField::make(d_from_field_label(field_label));
    if (field.contains("discriminant") && field.at("discriminant").get<std::int64_t>() != K.disc()) {
      throw Error(ErrorCode::ValidationError, "discriminant mismatch");
    }
    if (form.contains("is_CM") && form.at("is_CM").is_string() && form.at("is_CM").get<std::string>() == "yes") {
      throw Error(ErrorCode::ValidationError, "CM form: the semicircle law does not apply");
    }
    const auto weight = parse_int_list(form.at("weight"), "weight");
    std::vector<int> w(weight.begin(), weight.end());
    EigenvalueSeries E(K, w, form.at("label").get<std::string>());

    if (form.contains("level_norm")) {
      const Integer level_norm(std::to_string(form.at("level_norm").get<std::int64_t>()));
      if (level_norm > 1) {
        for (const auto& [q, e] : nt::factor(level_norm)) {
          for (const auto& P : split_rational_prime(K, q.get_si())) E.add_level_prime(P);
        }
      }
    }

    const auto& eigenvalues = form.at("hecke_eigenvalues");
    const auto& primes = field.at("primes");
    const std::size_t n = std::min(eigenvalues.size(), primes.size());
    for (std::size_t i = 0; i < n; ++i) {
      const PrimeIdeal P = identify_prime(K, primes[i].get<std::string>());
      if (E.level_support().count(P)) continue;
      const json& raw = eigenvalues[i];
      Rational value;
      if (raw.is_number_integer()) {
        value = Rational(Integer(std::to_string(raw.get<std::int64_t>())));
      } else {
        try {
          value = parse_rational(strip_spaces(raw.get<std::string>()));
        } catch (const Error&) {
          throw Error(ErrorCode::ValidationError, "eigenvalue '" + raw.dump() + "' is not rational");
        }
      }
      Rational c = value;
      if (normalization == Normalization::Arithmetic) c /= Rational(ipow(P.norm, E.k0() / 2));
      E.insert(P, c);
    }
    E.validate();
    return E;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("LMFDB record: ") + e.what());
  }
}

LmfdbClient::LmfdbClient(LmfdbOptions options, HttpGet transport)
    : options_(std::move(options)), transport_(std::move(transport)) {}

std::filesystem::path LmfdbClient::cache_path(const std::string& label) const {
  return options_.cache_dir / (cache_key(label) + ".json");
}

std::string LmfdbClient::get_with_retry(const std::string& url) {
  for (int attempt = 0;; ++attempt) {
    try {
      return transport_(url);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NetworkError || attempt + 1 >= options_.retries) throw;
    } catch (const std::exception& e) {
      if (attempt + 1 >= options_.retries) throw Error(ErrorCode::NetworkError, e.what());
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(options_.backoff_ms << attempt));
  }
}

EigenvalueSeries LmfdbClient::fetch(const std::string& label) {
  const auto path = cache_path(label);
  if (std::filesystem::exists(path)) {
    EigenvalueSeries cached = load_fixture(path);
    if (cached.label() == label) return cached;
  }
  if (options_.offline) throw Error(ErrorCode::NetworkError, "offline and '" + label + "' is not cached");

  const std::string form_body = get_with_retry(options_.base_url + "/api/hmf_forms/?label=" + label + "&_format=json");
  const json form_doc = parse_json(form_body, "hmf_forms");
  const json& form = first_record(form_doc, "hmf_forms");
  const std::string field_label = form.at("field_label").get<std::string>();
  const std::string field_body =
      get_with_retry(options_.base_url + "/api/hmf_fields/?label=" + field_label + "&_format=json");

  EigenvalueSeries series = series_from_lmfdb(form_body, field_body, options_.normalization);
  const std::string key = cache_key(label);
  write_file_atomic(options_.cache_dir / (key + ".form.raw.json"), form_body);
  write_file_atomic(options_.cache_dir / (key + ".field.raw.json"), field_body);
  write_file_atomic(path, serialize_eigen_file(series));
  return series;
}

EigenvalueSeries fetch_lmfdb(const std::string& base_url, const std::string& label, LmfdbOptions options) {
  options.base_url = base_url;
  LmfdbClient client(std::move(options), default_http_transport());
  return client.fetch(label);
}

}  // namespace hmsigns
