// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "hmsigns/curves.hpp"
#include "hmsigns/field_arith.hpp"
#include "hmsigns/nt.hpp"
#include "hmsigns/sato_tate.hpp"
#include "hmsigns/sign_pipeline.hpp"

using namespace hmsigns;

namespace {

std::vector<std::int64_t> good_primes(const CurveSpec& E, std::int64_t limit) {
  std::vector<std::int64_t> out;
  for (auto p : nt::primes_up_to(limit)) {
    if (has_good_reduction(E, p)) out.push_back(p);
  }
  return out;
}

void ApTableSerial(benchmark::State& state) {
  const auto E = *builtin_curve("37a");
  const auto primes = good_primes(E, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::ap_table(E, primes));
}

void ApTableParallel(benchmark::State& state) {
  const auto E = *builtin_curve("37a");
  const auto primes = good_primes(E, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ap_table(E, primes));
}

void EnumerateSerial(benchmark::State& state) {
  const auto K = QuadField::make(5);
  for (auto _ : state) benchmark::DoNotOptimize(reference::enumerate_prime_ideals(K, state.range(0)));
}

void EnumerateParallel(benchmark::State& state) {
  const auto K = QuadField::make(5);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_prime_ideals(K, state.range(0)));
}

void SampleSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::sample_semicircle(state.range(0), 42));
}

void SampleParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sample_semicircle(state.range(0), 42));
}

struct ProfileInput {
  EigenvalueSeries series;
  IdealCharacter chi;
};

const ProfileInput& profile_input() {
  static const ProfileInput input = [] {
    const auto K = QuadField::make(5);
    auto E = synth_eigen_series(K, 200000, 2, 42);
    auto chi = sign_character(E, FieldElement{Integer(2), Integer(0)}, {});
    return ProfileInput{std::move(E), std::move(chi)};
  }();
  return input;
}

void ProfileSerial(benchmark::State& state) {
  const auto& in = profile_input();
  for (auto _ : state) benchmark::DoNotOptimize(reference::build_sign_profile(in.series, in.chi, state.range(0)));
}

void ProfileParallel(benchmark::State& state) {
  const auto& in = profile_input();
  for (auto _ : state) benchmark::DoNotOptimize(build_sign_profile(in.series, in.chi, state.range(0)));
}

}  // namespace

BENCHMARK(ApTableSerial)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(ApTableParallel)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(EnumerateSerial)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(EnumerateParallel)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(SampleSerial)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(SampleParallel)->Arg(1000000)->Unit(benchmark::kMillisecond);
BENCHMARK(ProfileSerial)->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(ProfileParallel)->Arg(200000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
