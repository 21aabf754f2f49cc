#pragma once

// Client for Hilbert newform eigenvalues served by the LMFDB JSON API
// (/api/hmf_forms and /api/hmf_fields), with a local cache: one
// EigenFileSchema JSON per label plus the raw responses, all keyed by a
// hash of the label.

#include <filesystem>
#include <functional>
#include <string>

#include "hmsigns/sign_pipeline.hpp"

namespace hmsigns {

/// GET url -> body. Implementations throw Error(NetworkError) on failure.
using HttpGet = std::function<std::string(const std::string& url)>;

/// cpp-httplib backed transport.
HttpGet default_http_transport();

/// How the eigenvalue strings map to c(P, f).
///   arithmetic:  value = C(P, f) = c N^{k0/2}   (|value| <= 2 N^{(k0-1)/2})
///   coefficient: value = c(P, f)
enum class Normalization { Arithmetic, Coefficient };

Normalization parse_normalization(const std::string& text);

/// $HMSIGNS_CACHE_DIR, else ./.hmsigns-cache
std::filesystem::path default_cache_dir();

struct LmfdbOptions {
  std::string base_url = "https://www.lmfdb.org";
  std::filesystem::path cache_dir = default_cache_dir();
  bool offline = false;
  Normalization normalization = Normalization::Arithmetic;
  int retries = 3;
  int backoff_ms = 250;
};

/// Maps an hmf_forms record and its hmf_fields record onto an
/// EigenvalueSeries. Throws ValidationError for non-rational eigenvalues or
/// prime generators that do not match the integral basis.
EigenvalueSeries series_from_lmfdb(const std::string& form_json, const std::string& field_json,
                                   Normalization normalization);

class LmfdbClient {
 public:
  LmfdbClient(LmfdbOptions options, HttpGet transport);

  /// Cache first; network only on a miss (NetworkError when offline).
  EigenvalueSeries fetch(const std::string& label);

  std::filesystem::path cache_path(const std::string& label) const;
  const LmfdbOptions& options() const noexcept { return options_; }

 private:
  std::string get_with_retry(const std::string& url);

  LmfdbOptions options_;
  HttpGet transport_;
};

EigenvalueSeries fetch_lmfdb(const std::string& base_url, const std::string& label, LmfdbOptions options = {});

/// 16 hex digits of FNV-1a over the label.
std::string cache_key(const std::string& label);

}  // namespace hmsigns
