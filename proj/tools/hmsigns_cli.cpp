// hmsigns: command-line driver for the sign-equidistribution experiments.
//
// Exit status: 0 when every declared check passed, 1 when a check failed,
// 2 on bad input (parse, validation, network).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmsigns/characters.hpp"
#include "hmsigns/curves.hpp"
#include "hmsigns/eigen_file.hpp"
#include "hmsigns/errors.hpp"
#include "hmsigns/field_arith.hpp"
#include "hmsigns/formal_series.hpp"
#include "hmsigns/lmfdb.hpp"
#include "hmsigns/sato_tate.hpp"
#include "hmsigns/sign_pipeline.hpp"

using namespace hmsigns;
using nlohmann::json;

namespace {

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

struct Output {
  std::string format = "csv";
  std::string out;
};

struct SourceOptions {
  std::int64_t d = 1;
  std::string curve;
  std::string curve_coeffs;
  std::string fixture;
  std::string lmfdb;
  std::string normalization;
  std::string base_url = "https://www.lmfdb.org";
  std::string cache_dir;
  bool offline = false;
};

void add_output_flags(CLI::App* cmd, Output& o) {
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "write to this file instead of stdout");
}

void add_source_flags(CLI::App* cmd, SourceOptions& s) {
  auto* curve = cmd->add_option("--curve", s.curve, "builtin elliptic curve label (11a1, 37a, ...)");
  auto* coeffs = cmd->add_option("--curve-coeffs", s.curve_coeffs, "a1,a2,a3,a4,a6");
  auto* fixture = cmd->add_option("--fixture", s.fixture, "eigenvalue fixture JSON");
  auto* lmfdb = cmd->add_option("--lmfdb", s.lmfdb, "LMFDB Hilbert newform label");
  curve->excludes(coeffs, fixture, lmfdb);
  coeffs->excludes(fixture, lmfdb);
  fixture->excludes(lmfdb);
  cmd->add_option("--normalization", s.normalization, "LMFDB eigenvalue convention: arithmetic or coefficient")
      ->check(CLI::IsMember({"arithmetic", "coefficient"}));
  cmd->add_option("--base-url", s.base_url, "LMFDB base URL");
  cmd->add_option("--cache-dir", s.cache_dir, "cache directory (default $HMSIGNS_CACHE_DIR or .hmsigns-cache)");
  cmd->add_flag("--offline", s.offline, "never touch the network");
}

void emit(const Output& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(o.out, text);
  }
}

int report_checks(const std::vector<Check>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cerr << "  (" << c.detail << ")";
    std::cerr << "\n";
    ok = ok && c.pass;
  }
  return ok ? 0 : 1;
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) out.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

// "a" or "a,b" meaning a + b sqrt(d); a, b may be "n/m".
FieldElement parse_tau(const QuadField& K, const std::string& text) {
  const auto comma = text.find(',');
  const Rational a = parse_rational(text.substr(0, comma));
  const Rational b = comma == std::string::npos ? Rational(0) : parse_rational(text.substr(comma + 1));
  if (K.is_rational() && b != 0) throw Error(ErrorCode::InvalidArgument, "tau over Q takes a single integer");
  return element_from_sqrt_form(K, a, b);
}

PsiTable load_psi(const QuadField& K, const std::string& path) {
  if (path.empty()) return {};
  return parse_psi_table(K, read_file(path));
}

EigenvalueSeries load_source(const SourceOptions& s, std::int64_t x) {
  if (!s.curve.empty()) {
    const auto E = builtin_curve(s.curve);
    if (!E) throw Error(ErrorCode::InvalidArgument, "unknown curve '" + s.curve + "'");
    return series_from_curve(*E, x);
  }
  if (!s.curve_coeffs.empty()) return series_from_curve(parse_curve_coefficients(s.curve_coeffs), x);
  if (!s.fixture.empty()) return load_fixture(s.fixture);
  if (!s.lmfdb.empty()) {
    if (s.normalization.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--lmfdb needs --normalization arithmetic|coefficient");
    }
    LmfdbOptions opts;
    opts.base_url = s.base_url;
    opts.offline = s.offline;
    opts.normalization = parse_normalization(s.normalization);
    if (!s.cache_dir.empty()) opts.cache_dir = s.cache_dir;
    LmfdbClient client(opts, default_http_transport());
    return client.fetch(s.lmfdb);
  }
  throw Error(ErrorCode::InvalidArgument, "one of --curve, --curve-coeffs, --fixture, --lmfdb is required");
}

std::vector<std::int64_t> checkpoints(std::int64_t x) {
  std::vector<std::int64_t> out;
  for (std::int64_t t = 10; t < x; t *= 10) out.push_back(t);
  out.push_back(x);
  return out;
}

// --- primes ----------------------------------------------------------------

int cmd_primes(std::int64_t d, std::int64_t x, const Output& o) {
  const QuadField K = QuadField::make(d);
  const auto primes = enumerate_prime_ideals(K, x);
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& P : primes) {
      rows.push_back({{"norm", P.norm},
                      {"rational_prime", P.p},
                      {"root_label", P.root_label},
                      {"splitting", to_string(P.splitting)},
                      {"residue_degree", P.residue_degree}});
    }
    emit(o, json{{"d", d}, {"x", x}, {"primes", rows}}.dump(1) + "\n");
  } else {
    std::string text = "norm,rational_prime,root_label,splitting,residue_degree\n";
    for (const auto& P : primes) {
      text += std::to_string(P.norm) + "," + std::to_string(P.p) + "," + std::to_string(P.root_label) + "," +
              to_string(P.splitting) + "," + std::to_string(P.residue_degree) + "\n";
    }
    emit(o, text);
  }
  return 0;
}

// --- char --------------------------------------------------------------------

int cmd_char(std::int64_t d, const std::string& tau_text, std::int64_t x, const std::string& psi_file,
             const Output& o) {
  const QuadField K = QuadField::make(d);
  const FieldElement tau = parse_tau(K, tau_text);
  const IdealCharacter chi = IdealCharacter::from_tau(K, tau, load_psi(K, psi_file));
  json rows = json::array();
  std::string text = "norm,rational_prime,root_label,bad,eps_tau,chi\n";
  for (const auto& P : enumerate_prime_ideals(K, x)) {
    const bool bad = chi.is_bad(P);
    const int eps = P.p == 2 ? 0 : epsilon_tau(K, tau, P);
    const int value = chi.value(P);
    text += std::to_string(P.norm) + "," + std::to_string(P.p) + "," + std::to_string(P.root_label) + "," +
            (bad ? "1" : "0") + "," + std::to_string(eps) + "," + std::to_string(value) + "\n";
    rows.push_back({{"norm", P.norm},
                    {"rational_prime", P.p},
                    {"root_label", P.root_label},
                    {"bad", bad},
                    {"eps_tau", eps},
                    {"chi", value}});
  }
  if (o.format == "json") {
    emit(o, json{{"d", d}, {"tau", to_string(K, tau)}, {"values", rows}}.dump(1) + "\n");
  } else {
    emit(o, text);
  }
  return 0;
}

// --- signs -------------------------------------------------------------------

int cmd_signs(const SourceOptions& s, const std::string& tau_text, std::int64_t x, const std::string& psi_file,
              double eps, const Output& o) {
  const EigenvalueSeries E = load_source(s, x);
  const QuadField& K = E.field();
  if (!s.fixture.empty() || !s.lmfdb.empty()) {
    if (K.d() != s.d && s.d != 1) throw Error(ErrorCode::FieldMismatch, "--d does not match the data's field");
  }
  const FieldElement tau = parse_tau(K, tau_text);
  const PsiTable psi = load_psi(K, psi_file);
  const IdealCharacter chi = sign_character(E, tau, psi);
  const SignProfile profile = build_sign_profile(E, chi, x);

  std::vector<SignTally> rows;
  for (std::int64_t t : checkpoints(x)) {
    SignTally tally = tally_from_profile(profile, t);
    tally.tau = to_string(K, tau);
    rows.push_back(tally);
  }

  std::vector<Check> checks;
  bool consistent = true, monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    consistent = consistent && r.pos + r.neg + r.zero == r.total && r.total <= r.pi_x;
    if (i > 0) {
      const auto& q = rows[i - 1];
      monotone = monotone && q.pos <= r.pos && q.neg <= r.neg && q.zero <= r.zero && q.pi_x <= r.pi_x;
    }
  }
  checks.push_back({"tally-consistency", consistent, "pos + neg + zero = total at every checkpoint"});
  checks.push_back({"tally-monotone", monotone, "counts nondecreasing in x"});
  const CutoffCheck cut = epsilon_cutoff_check(profile, x, eps);
  checks.push_back({"epsilon-cutoff", cut.holds,
                    "eps=" + std::to_string(eps) + " lhs=" + cut.lhs.get_str() + " rhs=" + cut.rhs.get_str()});

  if (o.format == "json") {
    json doc;
    doc["label"] = E.label();
    doc["d"] = K.d();
    doc["tau"] = to_string(K, tau);
    json tallies = json::array();
    for (const auto& r : rows) tallies.push_back(json::parse(tally_to_json(r)));
    doc["tallies"] = tallies;
    doc["cutoff_check"] = {{"eps", eps},
                           {"lhs", cut.lhs.get_str()},
                           {"rhs", cut.rhs.get_str()},
                           {"holds", cut.holds},
                           {"lhs_lower_bound", cut.lhs_lower_bound}};
    doc["checks"] = checks_json(checks);
    emit(o, doc.dump(1) + "\n");
  } else {
    std::string text = tally_csv_header() + "\n";
    for (const auto& r : rows) text += tally_csv_row(r) + "\n";
    emit(o, text);
  }
  return report_checks(checks);
}

// --- stats -------------------------------------------------------------------

int cmd_stats(const SourceOptions& s, std::int64_t x, std::optional<std::uint64_t> synthetic_seed, int k0,
              int bins, double alpha, const std::string& svg, const Output& o) {
  const EigenvalueSeries E = synthetic_seed ? synth_eigen_series(QuadField::make(s.d), x, k0, *synthetic_seed)
                                            : load_source(s, x);
  std::vector<double> b;
  for (const auto& [P, c] : E.entries()) {
    if (P.norm <= x) b.push_back(sato_tate_coordinate(renormalize_C(c, P.norm, E.k0()), P.norm, E.k0()));
  }
  std::sort(b.begin(), b.end());
  const double coef = alpha > 0 ? ks_coefficient_for_alpha(alpha) : kDefaultKsCoefficient;
  const KsReport ks = ks_statistic(b, coef);
  const auto hist = semicircle_histogram(b, bins);
  if (!svg.empty()) write_file_atomic(svg, histogram_svg(hist));

  std::vector<Check> checks;
  char detail[128];
  std::snprintf(detail, sizeof detail, "n=%zu D=%.6f threshold=%.6f", ks.n, ks.statistic, ks.threshold);
  checks.push_back({"ks-semicircle", ks.pass, detail});

  if (o.format == "json") {
    json rows = json::array();
    for (const auto& h : hist) {
      rows.push_back({{"lo", h.lo}, {"hi", h.hi}, {"count", h.count}, {"observed", h.observed},
                      {"predicted", h.predicted}});
    }
    json doc{{"label", E.label()},
             {"n", ks.n},
             {"ks_statistic", ks.statistic},
             {"ks_threshold", ks.threshold},
             {"ks_pass", ks.pass},
             {"histogram", rows},
             {"checks", checks_json(checks)}};
    emit(o, doc.dump(1) + "\n");
  } else {
    emit(o, histogram_csv(hist));
  }
  return report_checks(checks);
}

// --- simulate ----------------------------------------------------------------

int cmd_simulate(std::int64_t d, std::int64_t x, int k0, std::uint64_t seed, const std::string& tau_text,
                 double tol, const Output& o) {
  const QuadField K = QuadField::make(d);
  const EigenvalueSeries E = synth_eigen_series(K, x, k0, seed);
  const FieldElement tau = parse_tau(K, tau_text);
  const IdealCharacter chi = sign_character(E, tau, {});
  const SignProfile profile = build_sign_profile(E, chi, x);
  SignTally tally = tally_from_profile(profile, x);
  tally.tau = to_string(K, tau);

  std::vector<double> b;
  b.reserve(profile.records.size());
  for (const auto& r : profile.records) b.push_back(r.b);
  std::sort(b.begin(), b.end());
  const KsReport ks = ks_statistic(b);

  const Rational half(1, 2);
  const Rational tol_q = rational_from_double(tol);
  const Rational dev = abs(tally.pos_density() - half);
  std::vector<Check> checks;
  checks.push_back({"pos-density-band", dev <= tol_q,
                    "pos_density=" + fixed_decimal(tally.pos_density(), 12) + " tol=" + std::to_string(tol)});
  checks.push_back({"zero-density", tally.zero_density() <= Rational(1, 10000),
                    "zero_density=" + fixed_decimal(tally.zero_density(), 12)});
  char detail[128];
  std::snprintf(detail, sizeof detail, "n=%zu D=%.6f threshold=%.6f", ks.n, ks.statistic, ks.threshold);
  checks.push_back({"ks-semicircle", ks.pass, detail});

  if (o.format == "json") {
    json doc{{"d", d},
             {"x", x},
             {"k0", k0},
             {"seed", seed},
             {"tally", json::parse(tally_to_json(tally))},
             {"ks", {{"n", ks.n}, {"statistic", ks.statistic}, {"threshold", ks.threshold}, {"pass", ks.pass}}},
             {"checks", checks_json(checks)}};
    emit(o, doc.dump(1) + "\n");
  } else {
    char ks_cols[96];
    std::snprintf(ks_cols, sizeof ks_cols, ",%zu,%.12f,%.12f", ks.n, ks.statistic, ks.threshold);
    emit(o, tally_csv_header() + ",zero_density,ks_n,ks_statistic,ks_threshold\n" + tally_csv_row(tally) + "," +
                fixed_decimal(tally.zero_density(), 12) + ks_cols + "\n");
  }
  return report_checks(checks);
}

// --- series-check --------------------------------------------------------------

int cmd_series_check(std::int64_t d, std::int64_t cutoff, std::uint64_t seed, int trials, const std::string& tau_text,
                     const Output& o) {
  const QuadField K = QuadField::make(d);
  const FieldElement tau = parse_tau(K, tau_text);
  const IdealCharacter chi = IdealCharacter::from_tau(K, tau);
  const auto primes = enumerate_prime_ideals(K, cutoff);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);

  std::vector<Check> checks;
  json rows = json::array();
  std::string text = "trial,terms,round_trip,residuals_zero,good_primes\n";
  bool all_ok = true;
  for (int t = 0; t < trials; ++t) {
    // lambda = 1 + random values on the good primes
    FormalSeries lambda = FormalSeries::identity(K, cutoff);
    for (const auto& P : primes) {
      if (chi.value(P) == 0) continue;
      lambda.set(IdealFactorization::prime_power(P), make_rational(num(rng), den(rng)));
    }
    const FormalSeries c = c_series_from_lambda(lambda, chi);
    const FormalSeries back = lambda_series_from_c(c, chi);
    const bool round_trip = back == lambda;
    bool residuals_zero = true;
    std::int64_t good = 0;
    for (const auto& P : primes) {
      if (chi.value(P) == 0) continue;
      ++good;
      residuals_zero = residuals_zero && extract_prime_relation(c, lambda, chi, P) == 0;
    }
    all_ok = all_ok && round_trip && residuals_zero;
    text += std::to_string(t) + "," + std::to_string(c.size()) + "," + (round_trip ? "1" : "0") + "," +
            (residuals_zero ? "1" : "0") + "," + std::to_string(good) + "\n";
    rows.push_back({{"trial", t},
                    {"terms", c.size()},
                    {"round_trip", round_trip},
                    {"residuals_zero", residuals_zero},
                    {"good_primes", good}});
  }
  checks.push_back({"euler-round-trip", all_ok, std::to_string(trials) + " trials at cutoff " + std::to_string(cutoff)});
  if (o.format == "json") {
    emit(o, json{{"d", d}, {"cutoff", cutoff}, {"trials", rows}, {"checks", checks_json(checks)}}.dump(1) + "\n");
  } else {
    emit(o, text);
  }
  return report_checks(checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sign equidistribution experiments for Hilbert modular forms of half-integral weight"};
  app.require_subcommand(1);

  Output out;
  std::int64_t d = 1, x = 1000;

  auto* primes = app.add_subcommand("primes", "enumerate prime ideals of norm <= x");
  primes->add_option("--d", d, "squarefree d of Q(sqrt d); 1 for Q");
  primes->add_option("--x", x, "norm bound")->check(CLI::PositiveNumber);
  add_output_flags(primes, out);

  std::string tau = "1", psi_file;
  auto* chr = app.add_subcommand("char", "evaluate eps_tau and chi on prime ideals");
  chr->add_option("--d", d);
  chr->add_option("--tau", tau, "a or a,b for a + b sqrt(d)");
  chr->add_option("--x", x)->check(CLI::PositiveNumber);
  chr->add_option("--psi-file", psi_file, "JSON table of psi values");
  add_output_flags(chr, out);

  SourceOptions source;
  double eps = 0.05;
  auto* signs = app.add_subcommand("signs", "tally signs of the half-integral-weight coefficients");
  signs->add_option("--d", source.d, "field (checked against fixture/LMFDB data)");
  signs->add_option("--tau", tau, "a or a,b for a + b sqrt(d)");
  signs->add_option("--x", x)->check(CLI::PositiveNumber);
  signs->add_option("--psi-file", psi_file);
  signs->add_option("--eps", eps, "epsilon for the cutoff check")->check(CLI::PositiveNumber);
  add_source_flags(signs, source);
  add_output_flags(signs, out);

  std::uint64_t seed = 42;
  std::optional<std::uint64_t> synthetic;
  int k0 = 2, bins = 64;
  double alpha = 0.0;
  std::string svg;
  auto* stats = app.add_subcommand("stats", "B-coordinate histogram and KS test against the semicircle");
  stats->add_option("--d", source.d);
  stats->add_option("--x", x)->check(CLI::PositiveNumber);
  stats->add_option("--synthetic", synthetic, "use synthetic data with this seed");
  stats->add_option("--k0", k0);
  stats->add_option("--bins", bins)->check(CLI::PositiveNumber);
  stats->add_option("--alpha", alpha, "KS significance level (default coefficient 1.63)");
  stats->add_option("--svg", svg, "also write an SVG histogram");
  add_source_flags(stats, source);
  add_output_flags(stats, out);

  double tol = 0.005;
  std::string sim_tau = "2";
  auto* simulate = app.add_subcommand("simulate", "synthetic end-to-end sign experiment");
  simulate->add_option("--d", d);
  simulate->add_option("--x", x)->check(CLI::PositiveNumber);
  simulate->add_option("--k0", k0);
  simulate->add_option("--seed", seed);
  simulate->add_option("--tau", sim_tau);
  simulate->add_option("--tol", tol, "allowed |pos_density - 1/2|");
  add_output_flags(simulate, out);

  int trials = 3;
  auto* series = app.add_subcommand("series-check", "Euler-product round trip and prime-relation residuals");
  series->add_option("--d", d);
  series->add_option("--x", x, "series cutoff")->check(CLI::PositiveNumber);
  series->add_option("--seed", seed);
  series->add_option("--trials", trials)->check(CLI::PositiveNumber);
  series->add_option("--tau", tau);
  add_output_flags(series, out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*primes) return cmd_primes(d, x, out);
    if (*chr) return cmd_char(d, tau, x, psi_file, out);
    if (*signs) return cmd_signs(source, tau, x, psi_file, eps, out);
    if (*stats) return cmd_stats(source, x, synthetic, k0, bins, alpha, svg, out);
    if (*simulate) return cmd_simulate(d, x, k0, seed, sim_tau, tol, out);
    if (*series) return cmd_series_check(d, x, seed, trials, tau, out);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
