#include <cmath>
#include <random>

#include <benchmark/benchmark.h>

#include "aaphase/models.hpp"
#include "aaphase/phase_engine.hpp"
#include "aaphase/rational.hpp"

using namespace aaphase;

namespace {

// Spacings 1/k for k = 1..n: the LCM grows like e^n, so this exercises the big-integer path.
void BM_LcmHarmonic(benchmark::State& state) {
  RationalSet set;
  for (int k = 1; k <= state.range(0); ++k) set.insert(Rational(BigInt(1), BigInt(k)));
  for (auto _ : state) benchmark::DoNotOptimize(lcm_rationals(set));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LcmHarmonic)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_LcmRandom(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> num(1, 1000), den(1, 97);
  RationalSet set;
  while (set.size() < static_cast<std::size_t>(state.range(0))) set.insert(Rational(BigInt(num(rng)), BigInt(den(rng))));
  for (auto _ : state) benchmark::DoNotOptimize(lcm_rationals(set));
}
BENCHMARK(BM_LcmRandom)->Arg(8)->Arg(64)->Arg(512);

void BM_FreeFieldGamma(benchmark::State& state) {
  const ExactModel m = free_field(free_field_coherent(1.0, {2.0, 1.0}, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(geometric_phase(m.spectrum, m.state));
}
BENCHMARK(BM_FreeFieldGamma)->Arg(30)->Arg(60);

void BM_TwoMirrorGamma(benchmark::State& state) {
  TwoMirrorParams p;
  p.omega_m = 2.0;
  p.r = Rational(2);
  p.k2 = Rational(BigInt(1), BigInt(2));
  p.field_amplitudes = {std::sqrt(0.5), std::sqrt(0.5)};
  p.beta = {0.5, 0.2};
  p.mirror_truncation = static_cast<int>(state.range(0));
  const ExactModel m = two_mirror_spectrum(p);
  for (auto _ : state) benchmark::DoNotOptimize(geometric_phase(m.spectrum, m.state));
}
BENCHMARK(BM_TwoMirrorGamma)->Arg(40)->Arg(160);

void BM_ThreeMirrorSpectrum(benchmark::State& state) {
  const ThreeMirrorParams p = three_mirror_coherent(2, 3, 1, 0, 0, {0.5, 0.1}, {0.7, 0}, {-0.4, 0.5});
  for (auto _ : state) {
    const ExactModel m = three_mirror_spectrum(p);
    benchmark::DoNotOptimize(geometric_phase(m.spectrum, m.state));
  }
}
BENCHMARK(BM_ThreeMirrorSpectrum)->Unit(benchmark::kMillisecond);

}  // namespace
