#include "hmsigns/eigen_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hmsigns/errors.hpp"

namespace hmsigns {

namespace {

using nlohmann::json;

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Integer integer_field(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Integer(std::to_string(v.get<std::int64_t>()));
  if (v.is_string()) {
    try {
      const Rational q = parse_rational(v.get<std::string>());
      if (q.get_den() == 1) return q.get_num();
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::ParseError, path + ": expected an integer");
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorCode::ParseError, path + ": missing '" + key + "'");
  return obj.at(key);
}

template <class T>
T typed(const json& v, const std::string& path) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::ParseError, path + ": wrong type");
  }
}

}  // namespace

EigenvalueSeries parse_eigen_file(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, source + ": " + line_col(text, e.byte) + ": malformed JSON");
  }
  const std::string root = source;
  const auto d = typed<std::int64_t>(require(require(doc, "field", root), "d", root + ".field"), root + ".field.d");
  const QuadField K = QuadField::make(d);

  const auto weight = typed<std::vector<int>>(require(doc, "weight", root), root + ".weight");
  if (static_cast<int>(weight.size()) != K.degree()) {
    throw Error(ErrorCode::ValidationError, root + ".weight: need one component per real embedding");
  }
  const auto label = typed<std::string>(require(doc, "label", root), root + ".label");
  EigenvalueSeries E(K, weight, label);

  if (doc.contains("level_primes")) {
    const auto& level = doc.at("level_primes");
    for (std::size_t i = 0; i < level.size(); ++i) {
      const std::string path = root + ".level_primes[" + std::to_string(i) + "]";
      const auto triple = typed<std::vector<std::int64_t>>(level[i], path);
      if (triple.size() != 3) throw Error(ErrorCode::ParseError, path + ": expected [norm, p, root_label]");
      const PrimeIdeal P = prime_ideal(K, triple[1], static_cast<int>(triple[2]));
      if (P.norm != triple[0]) throw Error(ErrorCode::ParseError, path + ": norm does not match the prime");
      E.add_level_prime(P);
    }
  }

  const auto& entries = require(doc, "entries", root);
  if (!entries.is_array()) throw Error(ErrorCode::ParseError, root + ".entries: expected a list");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string path = root + ".entries[" + std::to_string(i) + "]";
    const auto& row = entries[i];
    const auto norm = typed<std::int64_t>(require(row, "norm", path), path + ".norm");
    const auto p = typed<std::int64_t>(require(row, "rational_prime", path), path + ".rational_prime");
    const auto label_id = typed<int>(require(row, "root_label", path), path + ".root_label");
    PrimeIdeal P;
    try {
      P = prime_ideal(K, p, label_id);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    if (P.norm != norm) throw Error(ErrorCode::ParseError, path + ".norm: does not match the prime");
    const Integer num = integer_field(require(row, "c_num", path), path + ".c_num");
    const Integer den = integer_field(require(row, "c_den", path), path + ".c_den");
    if (den <= 0) throw Error(ErrorCode::ParseError, path + ".c_den: must be positive");
    Rational c(num, den);
    c.canonicalize();
    try {
      E.insert(P, c);
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError, path + ": " + e.what());
    }
  }
  E.validate();
  return E;
}

EigenvalueSeries load_fixture(const std::filesystem::path& path) {
  return parse_eigen_file(read_file(path), path.string());
}

std::string serialize_eigen_file(const EigenvalueSeries& E) {
  json doc;
  doc["field"] = {{"d", E.field().d()}};
  doc["weight"] = E.weight();
  doc["label"] = E.label();
  json level = json::array();
  for (const auto& P : E.level_support()) level.push_back({P.norm, P.p, P.root_label});
  doc["level_primes"] = level;
  json entries = json::array();
  for (const auto& [P, c] : E.entries()) {
    entries.push_back({{"norm", P.norm},
                       {"rational_prime", P.p},
                       {"root_label", P.root_label},
                       {"c_num", c.get_num().get_str()},
                       {"c_den", c.get_den().get_str()}});
  }
  doc["entries"] = entries;
  return doc.dump(1) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error(ErrorCode::InvalidArgument, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace hmsigns
