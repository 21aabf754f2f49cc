#include "hmsigns/lmfdb.hpp"

#ifdef HMSIGNS_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "hmsigns/errors.hpp"

namespace hmsigns {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::InvalidArgument, "URL without scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

HttpGet default_http_transport() {
  return [](const std::string& url) -> std::string {
    const auto [origin, path] = split_url(url);
    httplib::Client client(origin);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res) throw Error(ErrorCode::NetworkError, "GET " + url + ": " + httplib::to_string(res.error()));
    if (res->status != 200) {
      throw Error(ErrorCode::NetworkError, "GET " + url + ": HTTP " + std::to_string(res->status));
    }
    return res->body;
  };
}

}  // namespace hmsigns
