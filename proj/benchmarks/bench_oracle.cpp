#include <cmath>

#include <benchmark/benchmark.h>

#include "aaphase/models.hpp"
#include "aaphase/oracle.hpp"
#include "aaphase/text.hpp"

using namespace aaphase;

namespace {

OracleOptions options(double t_max, double fidelity_tol = kDefaultFidelityTolerance) {
  OracleOptions o;
  o.t_max = t_max;
  o.fidelity_tol = fidelity_tol;
  return o;
}

void BM_OracleSpin(benchmark::State& state) {
  const DenseModel d = spin_half_dense({1.0, kPi / 3});
  for (auto _ : state) benchmark::DoNotOptimize(generic_gamma(d.hamiltonian, d.psi0, options(1.5 * kPi)));
}
BENCHMARK(BM_OracleSpin)->Unit(benchmark::kMillisecond);

void BM_OracleFreeField(benchmark::State& state) {
  const DenseModel d = free_field_dense(free_field_coherent(1.0, {1.0, 0.5}, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(generic_gamma(d.hamiltonian, d.psi0, options(1.5 * kTwoPi)));
}
BENCHMARK(BM_OracleFreeField)->Arg(16)->Arg(31)->Unit(benchmark::kMillisecond);

// Block-diagonal propagation: one dense block per photon number.
void BM_OracleTwoMirror(benchmark::State& state) {
  TwoMirrorParams p;
  p.omega_m = 2.0;
  p.r = Rational(2);
  p.k2 = Rational(BigInt(1), BigInt(2));
  p.field_amplitudes = {std::sqrt(0.5), std::sqrt(0.5)};
  p.beta = {0.3, 0};
  p.mirror_truncation = static_cast<int>(state.range(0));
  const DenseModel d = two_mirror_dense(p);
  for (auto _ : state) benchmark::DoNotOptimize(generic_gamma(d.hamiltonian, d.psi0, options(1.5 * kTwoPi)));
}
BENCHMARK(BM_OracleTwoMirror)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

// The coupled C_S != 0 system: the largest dense problem the tool is expected to handle.
void BM_OracleThreeMirrorCoupled(benchmark::State& state) {
  const ThreeMirrorParams p = three_mirror_coherent(2, 3, 1, 1e-3, 1e-3, {0.5, 0}, {0.5, 0}, {0.5, 0});
  const DenseModel d = three_mirror_dense(p);
  for (auto _ : state)
    benchmark::DoNotOptimize(generic_gamma(d.hamiltonian, d.psi0, options(1.5 * kTwoPi, kApproximateFidelityTolerance)));
}
BENCHMARK(BM_OracleThreeMirrorCoupled)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace
