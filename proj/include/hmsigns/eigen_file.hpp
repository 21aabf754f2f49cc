#pragma once

// Eigenvalue fixture files:
//
// {
//   "field":  {"d": 5},
//   "weight": [2, 2],
//   "label":  "...",
//   "level_primes": [[norm, p, root_label], ...],          (optional)
//   "entries": [{"norm": 11, "rational_prime": 11, "root_label": 1,
//                "c_num": "-2", "c_den": "11"}, ...]
// }
//
// c_num / c_den may be JSON integers or decimal strings.

#include <filesystem>
#include <string>

#include "hmsigns/sign_pipeline.hpp"

namespace hmsigns {

/// Throws ParseError (with line/column or field path) or ValidationError.
EigenvalueSeries parse_eigen_file(const std::string& text, const std::string& source = "<memory>");
EigenvalueSeries load_fixture(const std::filesystem::path& path);

/// Deterministic serialization; parse_eigen_file(serialize_eigen_file(E)) == E.
std::string serialize_eigen_file(const EigenvalueSeries& E);

/// write-temp-then-rename
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace hmsigns
