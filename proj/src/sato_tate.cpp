#include "hmsigns/sato_tate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hmsigns/errors.hpp"

namespace hmsigns {

namespace {

double clamp_unit(double t) { return std::clamp(t, -1.0, 1.0); }

// (1/pi)(asin t + t sqrt(1 - t^2))
double antiderivative(double t) {
  t = clamp_unit(t);
  return (std::asin(t) + t * std::sqrt(1.0 - t * t)) / std::numbers::pi;
}

}  // namespace

double semicircle_cdf(double t) { return 0.5 + antiderivative(t); }

double semicircle_mass(double a, double b) {
  a = clamp_unit(a);
  b = clamp_unit(b);
  if (b <= a) return 0.0;
  return antiderivative(b) - antiderivative(a);
}

double semicircle_density(double t) {
  if (t <= -1.0 || t >= 1.0) return 0.0;
  return 2.0 / std::numbers::pi * std::sqrt(1.0 - t * t);
}

double semicircle_quantile(double u) {
  if (u <= 0.0) return -1.0;
  if (u >= 1.0) return 1.0;
  double lo = -1.0, hi = 1.0;
  double t = std::sin(std::numbers::pi * (u - 0.5));  // rough start
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double f = semicircle_cdf(t) - u;
    if (f == 0.0) return t;
    if (f > 0.0) {
      hi = t;
    } else {
      lo = t;
    }
    const double d = semicircle_density(t);
    double next = d > 0.0 ? t - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) < 1e-15) return next;
    t = next;
  }
  return t;
}

double ks_coefficient_for_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

KsReport ks_statistic(std::span<const double> sorted, double coefficient) {
  if (sorted.empty()) throw Error(ErrorCode::EmptySample, "KS statistic of an empty sample");
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = semicircle_cdf(sorted[i]);
    const double upper = static_cast<double>(i + 1) / n;
    const double lower = static_cast<double>(i) / n;
    d = std::max({d, std::abs(upper - f), std::abs(lower - f)});
  }
  KsReport r;
  r.n = sorted.size();
  r.statistic = d;
  r.threshold = coefficient / std::sqrt(n);
  r.pass = d <= r.threshold;
  return r;
}

// --- sampling ----------------------------------------------------------------

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SplitMix64::next() { return mix(state_ += kGolden); }

double SplitMix64::next_unit() { return unit_from_bits(next()); }

std::uint64_t stream_value(std::uint64_t seed, std::uint64_t index) { return mix(seed + (index + 1) * kGolden); }

// 52 bits so that every midpoint is exact and strictly inside (0, 1).
double unit_from_bits(std::uint64_t z) { return (static_cast<double>(z >> 12) + 0.5) * 0x1.0p-52; }

std::vector<double> sample_semicircle(std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        semicircle_quantile(unit_from_bits(stream_value(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

std::vector<double> reference::sample_semicircle(std::size_t n, std::uint64_t seed) {
  SplitMix64 gen(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(semicircle_quantile(gen.next_unit()));
  return out;
}

EigenvalueSeries synth_eigen_series(const QuadField& K, std::int64_t X, int k0, std::uint64_t seed) {
  std::vector<int> weight(static_cast<std::size_t>(K.degree()), k0);
  EigenvalueSeries E(K, std::move(weight), "synthetic:d=" + std::to_string(K.d()) + ":seed=" + std::to_string(seed));
  const auto primes = enumerate_prime_ideals(K, X);
  const auto samples = sample_semicircle(primes.size(), seed);
  const Integer den = kSynthDenominator;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const auto& P = primes[i];
    const double c = 2.0 * samples[i] / std::sqrt(static_cast<double>(P.norm));
    Integer num = static_cast<long>(std::llround(c * static_cast<double>(kSynthDenominator)));
    Rational q(num, den);
    q.canonicalize();
    while (q * q * P.norm > 4) {
      num += num > 0 ? -1 : 1;
      q = Rational(num, den);
      q.canonicalize();
    }
    E.insert(P, q);
  }
  return E;
}

std::vector<double> b_coordinates(const EigenvalueSeries& E) {
  std::vector<double> out;
  out.reserve(E.entries().size());
  for (const auto& [P, c] : E.entries()) {
    out.push_back(sato_tate_coordinate(renormalize_C(c, P.norm, E.k0()), P.norm, E.k0()));
  }
  return out;
}

// --- histogram ---------------------------------------------------------------

std::vector<HistogramBin> semicircle_histogram(std::span<const double> samples, int bins) {
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "need at least one bin");
  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  const double width = 2.0 / bins;
  for (int i = 0; i < bins; ++i) {
    auto& b = out[static_cast<std::size_t>(i)];
    b.lo = -1.0 + i * width;
    b.hi = i + 1 == bins ? 1.0 : -1.0 + (i + 1) * width;
    b.predicted = semicircle_mass(b.lo, b.hi);
  }
  for (double s : samples) {
    auto idx = static_cast<int>(std::floor((clamp_unit(s) + 1.0) / width));
    idx = std::clamp(idx, 0, bins - 1);
    ++out[static_cast<std::size_t>(idx)].count;
  }
  const double n = samples.empty() ? 1.0 : static_cast<double>(samples.size());
  for (auto& b : out) b.observed = static_cast<double>(b.count) / n;
  return out;
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::ostringstream os;
  os.precision(12);
  os << std::fixed;
  os << "bin_lo,bin_hi,count,observed_freq,predicted_mass\n";
  for (const auto& b : bins) {
    os << b.lo << "," << b.hi << "," << b.count << "," << b.observed << "," << b.predicted << "\n";
  }
  return os.str();
}

std::string histogram_svg(const std::vector<HistogramBin>& bins) {
  constexpr double W = 640, H = 360, margin = 30;
  double peak = 2.0 / std::numbers::pi;
  for (const auto& b : bins) peak = std::max(peak, b.observed / (b.hi - b.lo));
  peak *= 1.1;
  auto sx = [&](double t) { return margin + (t + 1.0) / 2.0 * (W - 2 * margin); };
  auto sy = [&](double density) { return H - margin - density / peak * (H - 2 * margin); };

  std::ostringstream os;
  os.precision(4);
  os << std::fixed;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& b : bins) {
    const double density = b.observed / (b.hi - b.lo);
    os << "<rect x=\"" << sx(b.lo) << "\" y=\"" << sy(density) << "\" width=\"" << sx(b.hi) - sx(b.lo)
       << "\" height=\"" << sy(0) - sy(density) << "\" fill=\"#9ecae1\" stroke=\"#3182bd\" stroke-width=\"0.5\"/>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
  for (int i = 0; i <= 400; ++i) {
    const double t = -1.0 + 2.0 * i / 400.0;
    os << sx(t) << "," << sy(semicircle_density(t)) << " ";
  }
  os << "\"/>\n";
  os << "<line x1=\"" << sx(-1) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1) << "\" y2=\"" << sy(0)
     << "\" stroke=\"black\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace hmsigns
