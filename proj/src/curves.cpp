#include "hmsigns/curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hmsigns/errors.hpp"
#include "hmsigns/nt.hpp"

namespace hmsigns {

namespace {

struct BInvariants {
  Integer b2, b4, b6, b8;
};

BInvariants b_invariants(const CurveSpec& E) {
  const Integer a1 = E.a1, a2 = E.a2, a3 = E.a3, a4 = E.a4, a6 = E.a6;
  return {a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6,
          a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4};
}

}  // namespace

Integer discriminant(const CurveSpec& E) {
  const auto [b2, b4, b6, b8] = b_invariants(E);
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

void validate_curve(const CurveSpec& E) {
  if (discriminant(E) == 0) throw Error(ErrorCode::ValidationError, "singular curve " + E.label);
}

std::vector<CurveSpec> builtin_curves() {
  return {
      {0, -1, 1, -10, -20, "11a1", false},
      {0, 0, 1, -1, 0, "37a1", false},
      {0, 1, 1, 0, 0, "43a1", false},
      {0, 1, 1, -2, 0, "389a1", false},
      {0, 0, 1, -7, 6, "5077a1", false},
      {0, 0, 0, -1, 0, "32a2", true},
      {0, 0, 0, 1, 0, "x3+x", true},
  };
}

std::optional<CurveSpec> builtin_curve(const std::string& label) {
  for (const auto& E : builtin_curves()) {
    if (E.label == label || E.label == label + "1") return E;
  }
  return std::nullopt;
}

CurveSpec parse_curve_coefficients(const std::string& text, std::string label) {
  std::vector<std::int64_t> coeffs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      coeffs.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "curve coefficient '" + item + "' is not an integer");
    }
  }
  if (coeffs.size() != 5) throw Error(ErrorCode::ParseError, "expected five coefficients a1,a2,a3,a4,a6");
  CurveSpec E{coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4], std::move(label), false};
  validate_curve(E);
  return E;
}

bool has_good_reduction(const CurveSpec& E, std::int64_t p) { return nt::mod(discriminant(E), p) != 0; }

std::int64_t count_points_naive(const CurveSpec& E, std::int64_t p) {
  const std::int64_t a1 = nt::mod(E.a1, p), a2 = nt::mod(E.a2, p), a3 = nt::mod(E.a3, p);
  const std::int64_t a4 = nt::mod(E.a4, p), a6 = nt::mod(E.a6, p);
  std::int64_t count = 1;
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t rhs = nt::mod(((x * x % p + a2 * x) % p * x + a4 * x + a6) % p, p);
    for (std::int64_t y = 0; y < p; ++y) {
      const std::int64_t lhs = (y * y + a1 * x % p * y + a3 * y) % p;
      if (lhs == rhs) ++count;
    }
  }
  return count;
}

namespace {

struct Cubic {
  std::int64_t c3, c2, c1, c0;  // reduced mod p
};

Cubic completed_square_rhs(const CurveSpec& E, std::int64_t p) {
  const auto [b2, b4, b6, b8] = b_invariants(E);
  return {4 % p, nt::mod(b2, p), nt::mod(2 * b4, p), nt::mod(b6, p)};
}

std::vector<std::int8_t> residue_table(std::int64_t p) {
  std::vector<std::int8_t> chi(static_cast<std::size_t>(p), -1);
  chi[0] = 0;
  std::int64_t sq = 0;
  for (std::int64_t x = 1; x <= (p - 1) / 2; ++x) {
    sq += 2 * x - 1;  // x^2 from (x-1)^2
    if (sq >= p) sq %= p;
    chi[static_cast<std::size_t>(sq)] = 1;
  }
  return chi;
}

}  // namespace

std::int64_t count_points_residue(const CurveSpec& E, std::int64_t p) {
  if (p == 2) throw Error(ErrorCode::InvalidArgument, "residue-sum count needs odd p");
  const auto f = completed_square_rhs(E, p);
  const auto chi = residue_table(p);
  std::int64_t sum = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t v = ((f.c3 * x % p + f.c2) % p * x % p + f.c1) % p * x % p;
    sum += chi[static_cast<std::size_t>((v + f.c0) % p)];
  }
  return p + 1 + sum;
}

namespace {

void check_hasse(const CurveSpec& E, std::int64_t p, std::int64_t ap) {
  if (ap * ap > 4 * p) {
    throw std::logic_error("Hasse bound violated for " + E.label + " at p = " + std::to_string(p));
  }
}

// Residue sum with rhs(x) advanced by forward differences: three add-mods
// per x instead of a Horner evaluation.
std::int64_t ap_kernel(const CurveSpec& E, std::int64_t p) {
  if (p <= 64) return p + 1 - count_points_naive(E, p);
  const auto f = completed_square_rhs(E, p);
  const auto chi = residue_table(p);
  auto eval = [&](std::int64_t x) { return (((f.c3 * x + f.c2) % p * x + f.c1) % p * x + f.c0) % p; };
  const std::int64_t f0 = eval(0), f1 = eval(1), f2 = eval(2), f3 = eval(3);
  std::int64_t v = f0;
  std::int64_t d1 = nt::mod(f1 - f0, p);
  std::int64_t d2 = nt::mod(f2 - 2 * f1 + f0, p);
  const std::int64_t d3 = nt::mod(f3 - 3 * f2 + 3 * f1 - f0, p);
  std::int64_t sum = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    sum += chi[static_cast<std::size_t>(v)];
    v += d1;
    if (v >= p) v -= p;
    d1 += d2;
    if (d1 >= p) d1 -= p;
    d2 += d3;
    if (d2 >= p) d2 -= p;
  }
  return -sum;
}

}  // namespace

std::int64_t ap_oracle(const CurveSpec& E, std::int64_t p) {
  if (!has_good_reduction(E, p)) {
    throw Error(ErrorCode::BadReduction, E.label + " has bad reduction at " + std::to_string(p));
  }
  const std::int64_t count = p <= 64 ? count_points_naive(E, p) : count_points_residue(E, p);
  const std::int64_t ap = p + 1 - count;
  check_hasse(E, p, ap);
  return ap;
}

std::vector<std::int64_t> ap_table(const CurveSpec& E, std::span<const std::int64_t> primes) {
  for (std::int64_t p : primes) {
    if (!has_good_reduction(E, p)) {
      throw Error(ErrorCode::BadReduction, E.label + " has bad reduction at " + std::to_string(p));
    }
  }
  std::vector<std::int64_t> out(primes.size());
  const auto n = static_cast<std::int64_t>(primes.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = ap_kernel(E, primes[static_cast<std::size_t>(i)]);
  }
  for (std::size_t i = 0; i < primes.size(); ++i) check_hasse(E, primes[i], out[i]);
  return out;
}

std::vector<std::int64_t> reference::ap_table(const CurveSpec& E, std::span<const std::int64_t> primes) {
  std::vector<std::int64_t> out;
  out.reserve(primes.size());
  for (std::int64_t p : primes) out.push_back(ap_oracle(E, p));
  return out;
}

EigenvalueSeries series_from_curve(const CurveSpec& E, std::int64_t X) {
  validate_curve(E);
  const QuadField Q = QuadField::make(1);
  EigenvalueSeries series(Q, {2}, E.label);
  std::vector<std::int64_t> good;
  for (std::int64_t p : nt::primes_up_to(X)) {
    if (has_good_reduction(E, p)) {
      good.push_back(p);
    } else {
      series.add_level_prime(split_rational_prime(Q, p).front());
    }
  }
  const auto ap = ap_table(E, good);
  for (std::size_t i = 0; i < good.size(); ++i) {
    Rational c(ap[i], good[i]);
    c.canonicalize();
    series.insert(split_rational_prime(Q, good[i]).front(), c);
  }
  return series;
}

}  // namespace hmsigns
