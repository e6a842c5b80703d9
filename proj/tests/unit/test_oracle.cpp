#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "aaphase/error.hpp"
#include "aaphase/models.hpp"
#include "aaphase/oracle.hpp"
#include "aaphase/phase_engine.hpp"

using namespace aaphase;

namespace {

DenseHamiltonian diag23() {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  h(0, 0) = 2;
  h(1, 1) = 3;
  return DenseHamiltonian(h);
}

Eigen::VectorXcd equal2() { return Eigen::VectorXcd::Constant(2, std::sqrt(0.5)); }

// Random Hermitian matrix with a random normalized state.
DenseModel random_dense(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::MatrixXcd h = (a + a.adjoint()) / 2;
  Eigen::VectorXcd psi(n);
  for (int i = 0; i < n; ++i) psi[i] = {g(rng), g(rng)};
  return {DenseHamiltonian(h), psi.normalized()};
}

}  // namespace

TEST(DenseHamiltonian, Validation) {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1, 2, 3, 4;
  try {
    DenseHamiltonian h(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::non_hermitian);
  }
  EXPECT_THROW(DenseHamiltonian(Eigen::MatrixXcd(0, 0)), Error);
  EXPECT_THROW(DenseHamiltonian(Eigen::MatrixXcd::Identity(2, 2), -1.0), Error);
}

TEST(DenseHamiltonian, TextRoundTrip) {
  Eigen::MatrixXcd h(2, 2);
  h << 1.5, std::complex<double>(0.25, -0.5), std::complex<double>(0.25, 0.5), -2;
  const DenseHamiltonian a(h, 2.0, 0.5);
  std::stringstream ss;
  a.write(ss);
  const DenseHamiltonian b = DenseHamiltonian::read(ss);
  EXPECT_EQ(b.matrix(), a.matrix());
  EXPECT_EQ(b.unit(), 2.0);
  EXPECT_EQ(b.hbar(), 0.5);

  std::istringstream with_comments("# two levels\ndimension 2\n2 0  # row 0\n0 3\n");
  EXPECT_EQ(DenseHamiltonian::read(with_comments).matrix(), diag23().matrix());

  std::istringstream short_input("dimension 2\n1 0 0\n");
  EXPECT_THROW(DenseHamiltonian::read(short_input), Error);
}

TEST(Evolve, ZeroHamiltonianKeepsState) {
  const DenseHamiltonian h(Eigen::MatrixXcd::Zero(3, 3));
  Eigen::VectorXcd psi(3);
  psi << 0.6, std::complex<double>(0, 0.8), 0;
  const EvolutionResult r = evolve(h, psi, 10.0, 11);
  for (const auto& s : r.states) EXPECT_LT((s - psi).norm(), 1e-15);
}

TEST(Evolve, TwoThreeReturnsAtTwoPi) {
  const Propagator p(diag23(), equal2());
  const std::complex<double> o = p.overlap(kTwoPi);
  EXPECT_NEAR(std::abs(o), 1.0, 1e-14);
  EXPECT_NEAR(std::arg(o), 0.0, 1e-12);
  EXPECT_LT((p.state(kTwoPi) - equal2()).norm(), 1e-12);
}

TEST(Evolve, SpinHalfHalfPeriodGivesMinusSign) {
  const DenseModel d = spin_half_dense({1.0, kPi / 2});
  const Propagator p(d.hamiltonian, d.psi0);
  EXPECT_LT((p.state(kPi) + d.psi0).norm(), 1e-12);
}

TEST(Evolve, UnitarityAndEnergyConservation) {
  std::mt19937_64 rng(17);
  const DenseModel m = random_dense(12, rng);
  const EvolutionResult r = evolve(m.hamiltonian, m.psi0, 20.0, 2001);
  const double e0 = mean_energy(m.hamiltonian, m.psi0);
  ASSERT_EQ(r.states.size(), 2001u);
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    EXPECT_NEAR(r.states[i].norm(), 1.0, 1e-10);
    EXPECT_NEAR(mean_energy(m.hamiltonian, r.states[i]), e0, 1e-10 * std::max(1.0, std::abs(e0)));
    EXPECT_NEAR(r.fidelity_track[i], std::abs(r.overlaps[i]), 1e-15);
  }
}

TEST(Evolve, MatchesMatrixExponentialSeries) {
  // Independent propagation: Taylor series of exp(-iHt) in small steps.
  std::mt19937_64 rng(23);
  const DenseModel m = random_dense(6, rng);
  const double t = 1.3;
  const int steps = 200;
  const Eigen::MatrixXcd step = [&] {
    const Eigen::MatrixXcd a = std::complex<double>(0, -t / steps) * m.hamiltonian.matrix();
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(6, 6);
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k < 20; ++k) {
      term = term * a / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }();
  Eigen::VectorXcd psi = m.psi0;
  for (int i = 0; i < steps; ++i) psi = step * psi;
  const Propagator p(m.hamiltonian, m.psi0);
  EXPECT_LT((p.state(t) - psi).norm(), 1e-11);
}

TEST(Propagator, BlockDecomposition) {
  const DenseModel d = two_mirror_dense([] {
    TwoMirrorParams p;
    p.r = 2;
    p.k2 = Rational(BigInt(1), BigInt(2));
    p.field_amplitudes = {std::sqrt(0.5), std::sqrt(0.5)};
    p.beta = 0.3;
    p.mirror_truncation = 20;
    return p;
  }());
  // The zero-photon block is diagonal (20 singletons), the one-photon block
  // is a single coupled chain.
  const Propagator p(d.hamiltonian, d.psi0);
  EXPECT_EQ(p.block_count(), 21u);
  EXPECT_FALSE(p.stationary());
}

TEST(DetectPeriod, TwoThree) {
  const EvolutionResult r = evolve(diag23(), equal2(), 1.5 * kTwoPi, 6000);
  const PeriodEstimate est = detect_period(r);
  EXPECT_NEAR(est.tau, kTwoPi, 1e-6);
  EXPECT_NEAR(est.phi, 0.0, 1e-6);
  EXPECT_FALSE(est.stationary);
}

TEST(DetectPeriod, SpinHalf) {
  const DenseModel d = spin_half_dense({1.0, kPi / 2});
  const EvolutionResult r = evolve(d.hamiltonian, d.psi0, 1.5 * kPi, 6000);
  const PeriodEstimate est = detect_period(r);
  EXPECT_NEAR(est.tau, kPi, 1e-6);
  EXPECT_LT(angle_distance(est.phi, kPi), 1e-6);
}

TEST(DetectPeriod, StationaryAndMissing) {
  const DenseModel d = spin_half_dense({1.0, 0.0});
  const EvolutionResult r = evolve(d.hamiltonian, d.psi0, 1.0, 10);
  const PeriodEstimate est = detect_period(r);
  EXPECT_TRUE(est.stationary);
  EXPECT_EQ(est.tau, r.times[1]);
  EXPECT_NEAR(est.fidelity, 1.0, 1e-15);

  const EvolutionResult too_short = evolve(diag23(), equal2(), 0.8 * kTwoPi, 4000);
  try {
    detect_period(too_short);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_period_detected);
  }
}

TEST(DetectPeriod, FirstReturnIsMinimal) {
  // Levels {0, 1/3, 1/2}: tau = 6*2*pi, with partial revivals in between.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
  h(1, 1) = 1.0 / 3;
  h(2, 2) = 0.5;
  const DenseHamiltonian H(h);
  const Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(3, 1 / std::sqrt(3.0));
  const double tau = 6 * kTwoPi;
  const EvolutionResult r = evolve(H, psi, 1.5 * tau, 40000);
  for (std::size_t i = 1; i < r.times.size() && r.times[i] < tau * (1 - 1e-4); ++i) {
    EXPECT_GT(1 - r.fidelity_track[i], kDefaultFidelityTolerance) << r.times[i];
  }
  EXPECT_NEAR(detect_period(r).tau, tau, 1e-6 * tau);
}

TEST(DynamicalPhase, Examples) {
  const DenseModel zero = spin_half_dense({1.0, kPi / 2});
  const EvolutionResult rz = evolve(zero.hamiltonian, zero.psi0, kPi, 100);
  EXPECT_NEAR(dynamical_phase(zero.hamiltonian, rz, kPi), 0.0, 1e-14);

  for (double theta : {0.4, 1.9}) {
    const DenseModel d = spin_half_dense({1.0, theta});
    const EvolutionResult r = evolve(d.hamiltonian, d.psi0, kPi, 100);
    EXPECT_NEAR(dynamical_phase(d.hamiltonian, r, kPi), kPi * std::cos(theta), 1e-12);
  }

  const EvolutionResult r23 = evolve(diag23(), equal2(), kTwoPi, 100);
  EXPECT_NEAR(dynamical_phase(diag23(), r23, kTwoPi), -5 * kPi, 1e-12);
}

TEST(GenericGamma, SpinHalfThirdPi) {
  const DenseModel d = spin_half_dense({1.0, kPi / 3});
  OracleOptions o;
  o.t_max = 1.5 * kPi;
  const PhaseReport r = generic_gamma(d.hamiltonian, d.psi0, o);
  EXPECT_EQ(r.method, Method::oracle);
  EXPECT_LT(angle_distance(r.gamma, kPi / 2), 1e-6);
  EXPECT_LT(*r.quadrature_residual, 1e-9);
  EXPECT_GT(*r.fidelity, 1 - 1e-8);
}

TEST(GenericGamma, TwoMirrorMatchesExact) {
  TwoMirrorParams p;
  p.r = 2;
  p.k2 = Rational(BigInt(1), BigInt(2));
  p.field_amplitudes = {std::sqrt(0.5), std::sqrt(0.5)};
  p.beta = 0.0;
  const ExactModel m = two_mirror_spectrum(p);
  const DenseModel d = two_mirror_dense(p);
  const PhaseReport exact = geometric_phase(m.spectrum, m.state);
  OracleOptions o;
  o.t_max = 1.5 * *exact.tau;
  const PhaseReport oracle = generic_gamma(d.hamiltonian, d.psi0, o);
  EXPECT_NEAR(*oracle.tau, *exact.tau, 1e-6 * *exact.tau);
  EXPECT_LT(angle_distance(*oracle.phi, *exact.phi), 1e-6);
  EXPECT_LT(angle_distance(oracle.gamma, exact.gamma), 1e-6);
}

TEST(GenericGamma, EigenstateIsStationary) {
  const DenseModel d = spin_half_dense({1.0, kPi});
  OracleOptions o;
  o.t_max = 1.0;
  const PhaseReport r = generic_gamma(d.hamiltonian, d.psi0, o);
  EXPECT_TRUE(r.stationary);
  EXPECT_EQ(r.gamma, 0.0);
}

TEST(GenericGamma, AgreesWithExactOnRandomRationalSpectra) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_real_distribution<double> w(0.2, 1.0);
  int checked = 0;
  while (checked < 10) {
    std::vector<Level> levels;
    std::vector<Component> comps;
    double norm = 0;
    for (int i = 0; i < 3; ++i) {
      levels.push_back(Level::exactly("l" + std::to_string(i), Rational(BigInt(num(rng)), BigInt(den(rng)))));
      comps.push_back({"l" + std::to_string(i), std::polar(w(rng), w(rng) * 6)});
      norm += std::norm(comps.back().amplitude);
    }
    for (auto& c : comps) c.amplitude /= std::sqrt(norm);
    const Spectrum s(1.0, levels);
    const StateDecomposition st(comps);
    if (check_cyclicality(s, st).kind != CyclicityKind::cyclic) continue;
    const PhaseReport exact = geometric_phase(s, st);
    if (*exact.tau_exact > Rational(12)) continue;
    const DenseModel d = dense_from_spectrum(s, st);
    OracleOptions o;
    o.t_max = 1.5 * *exact.tau;
    const PhaseReport oracle = generic_gamma(d.hamiltonian, d.psi0, o);
    EXPECT_NEAR(*oracle.tau, *exact.tau, 1e-6 * *exact.tau);
    EXPECT_LT(angle_distance(*oracle.phi, *exact.phi), 1e-6);
    EXPECT_LT(angle_distance(oracle.gamma, exact.gamma), 1e-6);
    ++checked;
  }
}
