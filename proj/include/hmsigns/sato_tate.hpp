#pragma once

// The semicircle measure mu = (2/pi) sqrt(1 - t^2) dt on [-1, 1], a
// Kolmogorov-Smirnov test against it, and a seeded sampler.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hmsigns/sign_pipeline.hpp"

namespace hmsigns {

/// Arguments are clamped to [-1, 1].
double semicircle_cdf(double t);
/// mu([a, b]); clamped, and 0 when b <= a.
double semicircle_mass(double a, double b);
/// Density (2/pi) sqrt(1 - t^2), 0 outside [-1, 1].
double semicircle_density(double t);
/// F^{-1}(u) for u in [0, 1], safeguarded Newton to 1e-13 in t.
double semicircle_quantile(double u);

inline constexpr double kDefaultKsCoefficient = 1.63;  // alpha ~ 0.01

/// Asymptotic Kolmogorov critical coefficient sqrt(-ln(alpha/2)/2).
double ks_coefficient_for_alpha(double alpha);

struct KsReport {
  std::size_t n = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// `sorted` must be ascending in [-1, 1]. Throws EmptySample.
KsReport ks_statistic(std::span<const double> sorted, double coefficient = kDefaultKsCoefficient);

// --- reproducible sampling ------------------------------------------------
//
// Stream: the i-th draw of seed s is SplitMix64's i-th output,
//   z_i = mix(s + (i + 1) * 0x9E3779B97F4A7C15),
// mapped to u_i = ((z_i >> 12) + 1/2) / 2^52 in (0, 1) and then through the
// quantile function. Draw i depends only on (s, i), which is what lets the
// parallel kernel split the index range freely.

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double next_unit();

 private:
  std::uint64_t state_;
};

std::uint64_t stream_value(std::uint64_t seed, std::uint64_t index);
double unit_from_bits(std::uint64_t z);

/// n semicircle draws, OpenMP over the index range.
std::vector<double> sample_semicircle(std::size_t n, std::uint64_t seed);

/// EigenvalueSeries over enumerate_prime_ideals(K, X) whose B(P) are
/// semicircle draws (draw i for the i-th prime). c = 2B/sqrt(N), rounded to
/// a multiple of 1e-12 (toward zero if rounding would leave [-1, 1]).
EigenvalueSeries synth_eigen_series(const QuadField& K, std::int64_t X, int k0, std::uint64_t seed);

/// Quantization of synthetic c values.
inline constexpr std::int64_t kSynthDenominator = 1'000'000'000'000;

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double observed = 0.0;   // count / n
  double predicted = 0.0;  // mu([lo, hi])
};

std::vector<HistogramBin> semicircle_histogram(std::span<const double> samples, int bins = 64);
std::string histogram_csv(const std::vector<HistogramBin>& bins);
std::string histogram_svg(const std::vector<HistogramBin>& bins);

/// B(P) for every entry of E (canonical prime order).
std::vector<double> b_coordinates(const EigenvalueSeries& E);

namespace reference {

/// Serial draw using the stateful generator.
std::vector<double> sample_semicircle(std::size_t n, std::uint64_t seed);

}  // namespace reference

}  // namespace hmsigns
