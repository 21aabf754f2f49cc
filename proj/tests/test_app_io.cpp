#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>

#include <unistd.h>

#include <json.hpp>

#include "hmsigns/curves.hpp"
#include "hmsigns/eigen_file.hpp"
#include "hmsigns/lmfdb.hpp"
#include "hmsigns/nt.hpp"
#include "test_support.hpp"

using namespace hmsigns;
using hmsigns::testing::code_of;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = HMSIGNS_FIXTURE_DIR;

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hmsigns_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(PointCount, SmallExample) {
  const CurveSpec E{0, 0, 0, 1, 0, "x3+x", true};
  EXPECT_EQ(count_points_naive(E, 3), 4);
  EXPECT_EQ(count_points_residue(E, 3), 4);
  EXPECT_EQ(ap_oracle(E, 3), 0);
}

TEST(PointCount, NaiveAndResidueAgreeBelow64) {
  for (const auto& E : builtin_curves()) {
    for (auto p : nt::primes_up_to(64)) {
      if (p == 2 || !has_good_reduction(E, p)) continue;
      EXPECT_EQ(count_points_naive(E, p), count_points_residue(E, p)) << E.label << " p=" << p;
    }
  }
}

TEST(PointCount, KnownTraces) {
  const auto e11 = *builtin_curve("11a1");
  const std::vector<std::pair<std::int64_t, std::int64_t>> t11{{2, -2}, {3, -1}, {5, 1}, {7, -2}, {13, 4}, {17, -2}};
  for (auto [p, a] : t11) EXPECT_EQ(ap_oracle(e11, p), a) << p;
  const auto e37 = *builtin_curve("37a");
  const std::vector<std::pair<std::int64_t, std::int64_t>> t37{{2, -2}, {3, -3}, {5, -2}, {7, -1}, {11, -5}, {13, -2}};
  for (auto [p, a] : t37) EXPECT_EQ(ap_oracle(e37, p), a) << p;
  EXPECT_EQ(discriminant(e37), 37);
  EXPECT_EQ(discriminant(e11), -161051);
}

TEST(PointCount, CmCurveVanishesAtInertPrimes) {
  // y^2 = x^3 + x has a_p = 0 for p = 3 mod 4
  const auto E = *builtin_curve("x3+x");
  for (auto p : nt::primes_up_to(2000)) {
    if (p % 4 == 3) EXPECT_EQ(ap_oracle(E, p), 0) << p;
  }
}

TEST(PointCount, ParallelTableMatchesOracle) {
  for (const auto& E : builtin_curves()) {
    std::vector<std::int64_t> primes;
    for (auto p : nt::primes_up_to(20000)) {
      if (has_good_reduction(E, p)) primes.push_back(p);
    }
    const auto fast = ap_table(E, primes);
    EXPECT_EQ(fast, reference::ap_table(E, primes)) << E.label;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      ASSERT_LE(fast[i] * fast[i], 4 * primes[i]);
    }
  }
}

TEST(PointCount, Errors) {
  const auto e37 = *builtin_curve("37a1");
  EXPECT_EQ(code_of([&] { ap_oracle(e37, 37); }), ErrorCode::BadReduction);
  const std::vector<std::int64_t> with_bad{2, 37};
  EXPECT_EQ(code_of([&] { ap_table(e37, with_bad); }), ErrorCode::BadReduction);
  EXPECT_EQ(code_of([] { parse_curve_coefficients("0,0,0,0,0"); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] { parse_curve_coefficients("0,0,1,-1"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_curve_coefficients("0,0,1,-1,x"); }), ErrorCode::ParseError);
  EXPECT_EQ(parse_curve_coefficients("0,0,1,-1,0").a4, -1);
  EXPECT_FALSE(builtin_curve("nope").has_value());
}

TEST(SeriesFromCurve, EntriesAndLevel) {
  const auto E = series_from_curve(*builtin_curve("x3+x"), 100);
  const auto Q = QuadField::make(1);
  EXPECT_EQ(*E.find(split_rational_prime(Q, 3)[0]), 0);
  EXPECT_EQ(E.find(split_rational_prime(Q, 2)[0]), nullptr);
  EXPECT_EQ(E.level_support().size(), 1u);
  EXPECT_EQ(E.k0(), 2);

  const auto e37 = series_from_curve(*builtin_curve("37a"), 100000);
  EXPECT_NO_THROW(e37.validate());
  EXPECT_EQ(e37.entries().size(), 9591u);
  for (const auto& [P, c] : e37.entries()) {
    ASSERT_EQ(hecke_eigenvalue(c, P.norm), ap_oracle(*builtin_curve("37a"), P.p));
    if (P.p > 2000) break;
  }
}

TEST(EigenFile, MinimalRoundTrip) {
  const auto E = load_fixture(kFixtures / "minimal.json");
  EXPECT_EQ(E.entries().size(), 1u);
  EXPECT_EQ(E.entries().begin()->second, Rational(-2, 11));
  const std::string once = serialize_eigen_file(E);
  const auto again = parse_eigen_file(once);
  EXPECT_EQ(again, E);
  EXPECT_EQ(serialize_eigen_file(again), once);

  const auto dir = fresh_dir("roundtrip");
  write_file_atomic(dir / "m.json", once);
  EXPECT_EQ(read_file(dir / "m.json"), once);
  EXPECT_FALSE(fs::exists(dir / "m.json.tmp"));
  fs::remove_all(dir);
}

TEST(EigenFile, CurveSeriesRoundTrip) {
  const auto E = series_from_curve(*builtin_curve("11a1"), 3000);
  EXPECT_EQ(parse_eigen_file(serialize_eigen_file(E)), E);
}

TEST(EigenFile, Rejections) {
  EXPECT_EQ(code_of([] { load_fixture(kFixtures / "odd_weight.json"); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] { load_fixture(kFixtures / "hasse_violation.json"); }), ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] { load_fixture(kFixtures / "malformed.json"); }), ErrorCode::ParseError);
  EXPECT_NE(message_of([] { load_fixture(kFixtures / "malformed.json"); }).find("line 4"), std::string::npos);
  EXPECT_EQ(code_of([] { load_fixture(kFixtures / "bad_field_type.json"); }), ErrorCode::ParseError);
  EXPECT_NE(message_of([] { load_fixture(kFixtures / "bad_field_type.json"); }).find("entries[1].c_den"),
            std::string::npos);
  EXPECT_EQ(code_of([] { load_fixture(kFixtures / "does_not_exist.json"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_eigen_file(R"({"field": {"d": 5}, "weight": [2], "label": "x", "entries": []})"); }),
            ErrorCode::ValidationError);
  EXPECT_EQ(code_of([] {
              parse_eigen_file(R"({"field": {"d": 5}, "weight": [2, 2], "label": "x",
                "entries": [{"norm": 13, "rational_prime": 11, "root_label": 1, "c_num": 0, "c_den": 1}]})");
            }),
            ErrorCode::ParseError);
}

// --- LMFDB client ------------------------------------------------------------

namespace {

struct FakeLmfdb {
  std::string form = read_file(kFixtures / "hmf_form_payload.json");
  std::string field = read_file(kFixtures / "hmf_field_payload.json");
  std::shared_ptr<std::atomic<int>> calls = std::make_shared<std::atomic<int>>(0);
  std::shared_ptr<std::vector<std::string>> urls = std::make_shared<std::vector<std::string>>();

  HttpGet transport() const {
    return [*this](const std::string& url) {
      ++*calls;
      urls->push_back(url);
      if (url.find("/api/hmf_forms/") != std::string::npos) return form;
      if (url.find("/api/hmf_fields/") != std::string::npos) return field;
      throw Error(ErrorCode::NetworkError, "404 " + url);
    };
  }
};

HttpGet failing_transport(std::shared_ptr<std::atomic<int>> calls) {
  return [calls](const std::string&) -> std::string {
    ++*calls;
    throw Error(ErrorCode::NetworkError, "network disabled");
  };
}

}  // namespace

TEST(Lmfdb, PayloadMapping) {
  FakeLmfdb fake;
  const auto E = series_from_lmfdb(fake.form, fake.field, Normalization::Arithmetic);
  const auto K = QuadField::make(5);
  EXPECT_EQ(E.field(), K);
  EXPECT_EQ(E.weight(), (std::vector<int>{2, 2}));
  EXPECT_EQ(E.label(), "2.2.5.1-31.1-t");
  EXPECT_EQ(*E.find(prime_ideal(K, 2, 0)), Rational(-3, 4));
  EXPECT_EQ(*E.find(prime_ideal(K, 5, 0)), Rational(-2, 5));
  EXPECT_EQ(*E.find(prime_ideal(K, 3, 0)), Rational(2, 9));
  // -w + 4 vanishes at the root 4 of w^2 - w - 1 mod 11 (label 1), w + 3 at the root 8 (label 2)
  EXPECT_EQ(*E.find(prime_ideal(K, 11, 1)), Rational(4, 11));
  EXPECT_EQ(*E.find(prime_ideal(K, 11, 2)), Rational(-4, 11));
  EXPECT_EQ(*E.find(prime_ideal(K, 19, 1)), Rational(-4, 19));
  EXPECT_EQ(*E.find(prime_ideal(K, 29, 2)), Rational(-2, 29));
  EXPECT_EQ(E.find(prime_ideal(K, 31, 1)), nullptr);
  EXPECT_EQ(E.level_support().size(), 2u);

  // pre-divided values read as c reproduce the arithmetic mapping
  const std::vector<std::int64_t> norms{4, 5, 9, 11, 11, 19, 19, 29, 29, 31};
  auto divided = nlohmann::json::parse(fake.form);
  auto& values = divided["data"][0]["hecke_eigenvalues"];
  for (std::size_t i = 0; i < norms.size(); ++i) {
    values[i] = to_string(make_rational(std::stol(values[i].get<std::string>()), norms[i]));
  }
  EXPECT_EQ(series_from_lmfdb(divided.dump(), fake.field, Normalization::Coefficient), E);
  // read as c directly, a(P) = -3 at norm 4 gives |B| = 3
  EXPECT_EQ(code_of([&] { series_from_lmfdb(fake.form, fake.field, Normalization::Coefficient); }),
            ErrorCode::ValidationError);
}

TEST(Lmfdb, NonRationalEigenvalueRejected) {
  FakeLmfdb fake;
  auto form = fake.form;
  form.replace(form.find("\"2\""), 3, "\"e + 1\"");
  EXPECT_EQ(code_of([&] { series_from_lmfdb(form, fake.field, Normalization::Arithmetic); }),
            ErrorCode::ValidationError);
}

TEST(Lmfdb, GeneratorMustMatchBasis) {
  FakeLmfdb fake;
  auto field = fake.field;
  field.replace(field.find("-w + 4"), 6, "-w + 5");
  EXPECT_EQ(code_of([&] { series_from_lmfdb(fake.form, field, Normalization::Arithmetic); }),
            ErrorCode::ValidationError);
}

TEST(Lmfdb, FetchCachesAndCacheHitAvoidsNetwork) {
  const auto dir = fresh_dir("lmfdb");
  FakeLmfdb fake;
  LmfdbOptions opts;
  opts.cache_dir = dir;
  opts.base_url = "http://lmfdb.invalid";
  LmfdbClient online(opts, fake.transport());
  const auto E = online.fetch("2.2.5.1-31.1-t");
  EXPECT_EQ(*fake.calls, 2);
  EXPECT_EQ(fake.urls->at(0).rfind("http://lmfdb.invalid/api/hmf_forms/", 0), 0u);
  const std::string key = cache_key("2.2.5.1-31.1-t");
  EXPECT_TRUE(fs::exists(dir / (key + ".json")));
  EXPECT_EQ(read_file(dir / (key + ".form.raw.json")), fake.form);
  EXPECT_EQ(read_file(dir / (key + ".field.raw.json")), fake.field);

  auto calls = std::make_shared<std::atomic<int>>(0);
  LmfdbClient offline_client(opts, failing_transport(calls));
  EXPECT_EQ(offline_client.fetch("2.2.5.1-31.1-t"), E);
  EXPECT_EQ(*calls, 0);

  opts.offline = true;
  LmfdbClient strict(opts, failing_transport(calls));
  EXPECT_EQ(strict.fetch("2.2.5.1-31.1-t"), E);
  EXPECT_EQ(code_of([&] { strict.fetch("2.2.5.1-not-cached"); }), ErrorCode::NetworkError);
  EXPECT_EQ(*calls, 0);
  fs::remove_all(dir);
}

TEST(Lmfdb, RetriesThenGivesUp) {
  const auto dir = fresh_dir("retry");
  LmfdbOptions opts;
  opts.cache_dir = dir;
  opts.retries = 3;
  opts.backoff_ms = 1;
  auto calls = std::make_shared<std::atomic<int>>(0);
  LmfdbClient client(opts, failing_transport(calls));
  EXPECT_EQ(code_of([&] { client.fetch("2.2.5.1-31.1-t"); }), ErrorCode::NetworkError);
  EXPECT_EQ(*calls, 3);

  FakeLmfdb fake;
  auto flaky_calls = std::make_shared<int>(0);
  HttpGet flaky = [fake, flaky_calls, t = fake.transport()](const std::string& url) {
    if ((*flaky_calls)++ == 0) throw Error(ErrorCode::NetworkError, "transient");
    return t(url);
  };
  LmfdbClient retrying(opts, flaky);
  EXPECT_NO_THROW(retrying.fetch("2.2.5.1-31.1-t"));
  fs::remove_all(dir);
}

TEST(Lmfdb, NormalizationParsingAndCacheKey) {
  EXPECT_EQ(parse_normalization("arithmetic"), Normalization::Arithmetic);
  EXPECT_EQ(parse_normalization("coefficient"), Normalization::Coefficient);
  EXPECT_EQ(code_of([] { parse_normalization("other"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(cache_key(""), "cbf29ce484222325");
  EXPECT_EQ(cache_key("a"), "af63dc4c8601ec8c");
  EXPECT_NE(cache_key("a"), cache_key("b"));
}
