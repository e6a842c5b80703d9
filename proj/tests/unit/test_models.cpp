#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "aaphase/error.hpp"
#include "aaphase/models.hpp"
#include "aaphase/phase_engine.hpp"

using namespace aaphase;

namespace {

Rational q(std::int64_t p, std::int64_t d) { return Rational(BigInt(p), BigInt(d)); }

double factorial(int n) { return std::tgamma(n + 1.0); }

double total_mass(const std::vector<Complex>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0, [](double s, Complex c) { return s + std::norm(c); });
}

TwoMirrorParams two_mirror(Rational r, Rational k2, std::vector<Complex> field, Complex beta) {
  TwoMirrorParams p;
  p.omega_m = 1.0;
  p.r = std::move(r);
  p.k2 = std::move(k2);
  p.field_amplitudes = std::move(field);
  p.beta = beta;
  p.mirror_truncation = 40;
  return p;
}

const double kHalf = std::sqrt(0.5);

}  // namespace

TEST(Coherent, VacuumAndNormalization) {
  const CoherentExpansion vac = coherent_amplitudes(0.0, 10);
  EXPECT_EQ(vac.amplitudes[0], Complex(1.0));
  for (std::size_t n = 1; n < vac.amplitudes.size(); ++n) EXPECT_EQ(vac.amplitudes[n], Complex(0.0));

  const CoherentExpansion one = coherent_amplitudes(1.0, 20);
  EXPECT_LT(one.tail_mass, 1e-10);
  EXPECT_NEAR(total_mass(one.amplitudes), 1.0, 1e-15);

  // Poisson tail evaluated term by term.
  double tail = 0;
  for (int n = 20; n < 60; ++n) tail += std::exp(-1.0) / factorial(n);
  EXPECT_NEAR(one.tail_mass, tail, 1e-3 * tail);

  EXPECT_THROW(coherent_amplitudes(3.0, 5), Error);
}

TEST(Coherent, MatchesClosedFormAmplitudes) {
  const Complex alpha(0.6, -0.3);
  const CoherentExpansion c = coherent_amplitudes(alpha, 25);
  for (int n = 0; n < 25; ++n) {
    const Complex expected = std::exp(-std::norm(alpha) / 2) * std::pow(alpha, n) / std::sqrt(factorial(n));
    EXPECT_LT(std::abs(c.amplitudes[n] - expected), 1e-14) << n;
  }
}

TEST(Displaced, VacuumIsCoherent) {
  const Complex d(0.4, 0.7);
  const CoherentExpansion a = displaced_amplitudes({1.0}, d, 30);
  const CoherentExpansion b = coherent_amplitudes(d, 30);
  for (int n = 0; n < 30; ++n) EXPECT_LT(std::abs(a.amplitudes[n] - b.amplitudes[n]), 1e-13);
}

TEST(Displaced, FirstExcitedState) {
  // <m|D(d)|1> = exp(-|d|^2/2) d^(m-1) (m - |d|^2) / sqrt(m!)
  const Complex d(-0.5, 0.3);
  const CoherentExpansion a = displaced_amplitudes({0.0, 1.0}, d, 30);
  const double d2 = std::norm(d);
  EXPECT_LT(std::abs(a.amplitudes[0] - (-std::conj(d) * std::exp(-d2 / 2))), 1e-14);
  for (int m = 1; m < 30; ++m) {
    const Complex expected = std::exp(-d2 / 2) * std::pow(d, m - 1) * (m - d2) / std::sqrt(factorial(m));
    EXPECT_LT(std::abs(a.amplitudes[m] - expected), 1e-13) << m;
  }
  EXPECT_NEAR(total_mass(a.amplitudes), 1.0, 1e-14);
}

TEST(SpinHalf, Basics) {
  const ExactModel m = spin_half({2.0, kPi / 2});
  EXPECT_EQ(*m.spectrum.at("up").exact, Rational(-1));
  EXPECT_EQ(*m.spectrum.at("down").exact, Rational(1));
  EXPECT_EQ(m.spectrum.unit(), 2.0);
  EXPECT_NEAR(mean_energy(m.spectrum, m.state), 0.0, 1e-15);
  EXPECT_NEAR(spin_half_gamma_closed_form({1.0, kPi / 3}), kPi / 2, 1e-15);
  EXPECT_EQ(spin_half_gamma_closed_form({1.0, 0.0}), 0.0);

  const DenseModel d = spin_half_dense({2.0, 0.9});
  EXPECT_NEAR(mean_energy(d.hamiltonian, d.psi0), -2.0 * std::cos(0.9), 1e-14);
}

TEST(FreeField, CoherentPeriod) {
  const FreeFieldParams p = free_field_coherent(1.5, Complex(1.0, 0.5), 31);
  const ExactModel m = free_field(p);
  EXPECT_EQ(period(m.spectrum, m.state).exact, Rational(1));
  EXPECT_NEAR(mean_energy(m.spectrum, m.state), 1.5 * 1.25, 1e-9);

  const ExactModel vac = free_field({1.0, {{0, 1.0}}});
  EXPECT_EQ(check_cyclicality(vac.spectrum, vac.state).kind, CyclicityKind::stationary);
  EXPECT_EQ(geometric_phase(vac.spectrum, vac.state).gamma, 0.0);
}

TEST(TwoMirror, DenseBlocksMatchDisplacedOscillator) {
  // Truncating the mirror spoils the top of each photon-number block. At
  // M = 40 and k n = 3.2 only the first few levels hold to 1e-8; the lowest
  // 80% of every block needs M of order 1100, hence 1200 here. The blocks
  // are tridiagonal, so their eigenvalues come from the tridiagonal solver.
  const int M = 1200;
  for (const Rational& k2 : {q(1, 9), q(1, 2), q(16, 25)}) {
    TwoMirrorParams p = two_mirror(2, k2, {0.2, 0.2, 0.2, 0.2, std::sqrt(0.84)}, 0.0);
    p.mirror_truncation = M;
    const DenseModel d = two_mirror_dense(p);
    const Eigen::MatrixXcd& h = d.hamiltonian.matrix();
    for (int n = 0; n < 5; ++n) {
      Eigen::VectorXd diag(M), sub(M - 1);
      bool tridiagonal = true;
      for (int i = 0; i < M; ++i) {
        diag[i] = h(n * M + i, n * M + i).real();
        if (i + 1 < M) sub[i] = h(n * M + i + 1, n * M + i).real();
        for (int j = i + 2; j < M; ++j) tridiagonal = tridiagonal && h(n * M + i, n * M + j) == 0.0;
      }
      ASSERT_TRUE(tridiagonal);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
      solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      const Eigen::VectorXd& ev = solver.eigenvalues();
      double worst = 0;
      for (int m = 0; m < M * 8 / 10; ++m) {
        const double expected = (p.r * Rational(n) - p.k2 * Rational(n * n)).to_double() + m;
        worst = std::max(worst, std::abs(ev[m] - expected) / std::max(1.0, std::abs(expected)));
      }
      EXPECT_LE(worst, 1e-8) << "k2=" << k2.str() << " n=" << n;
    }
  }
}

TEST(TwoMirror, MeanEnergyIdentity) {
  for (Complex beta : {Complex(0.0), Complex(0.3), Complex(0.5, 0.2), Complex(-0.4, 0.6)}) {
    for (const auto& field : std::vector<std::vector<Complex>>{{1.0}, {0.0, 1.0}, {kHalf, kHalf}, {0.6, Complex(0, 0.48), 0.64}}) {
      const TwoMirrorParams p = two_mirror(2, q(1, 2), field, beta);
      const double closed = two_mirror_mean_energy(p);
      const ExactModel m = two_mirror_spectrum(p);
      const DenseModel d = two_mirror_dense(p);
      const double scale = std::max(1.0, std::abs(closed));
      EXPECT_LE(std::abs(mean_energy(m.spectrum, m.state) - closed), 1e-10 * scale);
      EXPECT_LE(std::abs(mean_energy(d.hamiltonian, d.psi0) - closed), 1e-10 * scale);
    }
  }
}

TEST(TwoMirror, PeriodAndClosedForm) {
  const TwoMirrorParams p = two_mirror(2, q(1, 2), {kHalf, kHalf}, Complex(0.5, 0.2));
  const ExactModel m = two_mirror_spectrum(p);
  const PhaseReport r = geometric_phase(m.spectrum, m.state);
  EXPECT_EQ(r.phi_exact, Rational(0));
  EXPECT_EQ(*r.tau_exact, Rational(2));
  EXPECT_NEAR(*r.tau, 4 * kPi, 1e-13);

  // p-form equals the exact route over the loop of duration p periods of the mirror.
  const PhaseReport loop = geometric_phase_over(m.spectrum, m.state, Rational(2));
  EXPECT_LT(angle_distance(two_mirror_gamma_closed_form(p, 2), loop.gamma), 1e-10);
}

TEST(TwoMirror, ClosedFormExamples) {
  // beta = 0, one photon, r = 2, p = 2: 2*pi*(1 + 4) = 0 mod 2*pi.
  const TwoMirrorParams one = two_mirror(2, q(1, 2), {0.0, 1.0}, 0.0);
  EXPECT_LT(angle_distance(two_mirror_gamma_closed_form(one, 2), 0.0), 1e-12);
  const TwoMirrorParams vac = two_mirror(2, q(1, 2), {1.0}, 0.0);
  EXPECT_LT(angle_distance(two_mirror_gamma_closed_form(vac, 2), 0.0), 1e-12);
  const ExactModel m = two_mirror_spectrum(vac);
  EXPECT_EQ(check_cyclicality(m.spectrum, m.state).kind, CyclicityKind::stationary);
}

TEST(TwoMirror, DecoupledLimit) {
  const TwoMirrorParams p = two_mirror(q(3, 2), Rational(0), {kHalf, kHalf}, 0.0);
  const ExactModel m = two_mirror_spectrum(p);
  EXPECT_EQ(*m.spectrum.at("1,0").exact, q(3, 2));
  EXPECT_EQ(*m.spectrum.at("1,2").exact, q(7, 2));
}

TEST(ThreeMirror, VacuumHasZeroEigenvalue) {
  const ThreeMirrorParams p = three_mirror_coherent(2, 3, 1, 0, 0, 0.0, 0.0, 0.0, 4, 4, 4);
  const ExactModel m = three_mirror_spectrum(p);
  EXPECT_EQ(*m.spectrum.at("0,0,0").exact, Rational(0));
  EXPECT_EQ(total_phase(m.spectrum, m.state).value, 0.0);
  EXPECT_LT(angle_distance(three_mirror_gamma_coherent(p, 0.0, 0.0, 0.0, 1), 0.0), 1e-15);
}

TEST(ThreeMirror, DecoupledPeriodAndGamma) {
  const Complex alpha(0.7, 0.2);
  const Complex beta(-0.3, 0.5);
  const Complex mu(0.9, -0.1);
  const ThreeMirrorParams p = three_mirror_coherent(2, 3, 1, 0, 0, alpha, beta, mu);
  const ExactModel m = three_mirror_spectrum(p);
  const PhaseReport r = geometric_phase(m.spectrum, m.state);
  EXPECT_EQ(*r.tau_exact, Rational(1));
  const double expected = kTwoPi * (std::norm(alpha) * 2 + std::norm(beta) * 3 + std::norm(mu));
  EXPECT_LT(angle_distance(r.gamma, expected), 1e-10);
  EXPECT_LT(angle_distance(three_mirror_gamma_coherent(p, alpha, beta, mu, 1), r.gamma), 1e-10);
  EXPECT_LT(angle_distance(three_mirror_gamma_closed_form(p, 1), r.gamma), 1e-10);
}

TEST(ThreeMirror, MirrorOnlyFamilyHasIntegerPeriod) {
  // |0 0 n> states: only mirror levels occupied, tau = 2*pi/omega_m.
  ThreeMirrorParams p = three_mirror_coherent(std::sqrt(2.0), std::sqrt(3.0), 1, 0.01, 0, 0.0, 0.0, Complex(0.8, 0.1));
  const ExactModel m = three_mirror_spectrum(p);
  EXPECT_EQ(*period(m.spectrum, m.state).exact, Rational(1));
}

TEST(ThreeMirror, MeanEnergyMatchesDense) {
  const ThreeMirrorParams p = three_mirror_coherent(2, 3, 1, 0.05, 0.02, Complex(0.5, 0.1), 0.4, Complex(0.3, -0.6), 10, 10, 20);
  const DenseModel d = three_mirror_dense(p);
  EXPECT_NEAR(three_mirror_mean_energy(p), mean_energy(d.hamiltonian, d.psi0), 1e-10);
}

TEST(ThreeMirror, CoherentFormMatchesGeneralForm) {
  const Complex alpha(0.5, 0.1), beta(0.4, 0), mu(0.3, -0.6);
  const ThreeMirrorParams p = three_mirror_coherent(2, 3, 1, 0.05, 0.02, alpha, beta, mu);
  EXPECT_LT(angle_distance(three_mirror_gamma_coherent(p, alpha, beta, mu, 1), three_mirror_gamma_closed_form(p, 1)), 1e-9);
}

TEST(ThreeMirror, CouplingBreaksExactSpectrum) {
  const ThreeMirrorParams p = three_mirror_coherent(2, 3, 1, 1e-3, 1e-3, 0.5, 0.5, 0.5, 12, 12, 16);
  EXPECT_THROW(three_mirror_spectrum(p), Error);
}

TEST(ThreeMirror, BlockFrequencyIsChi) {
  // Mirror block at n_a = 0, n_b photons: level spacing of the dense block
  // against sqrt(omega_m (omega_m + 2 C_S n_b)).
  const double cs = 1e-3;
  ThreeMirrorParams p = three_mirror_coherent(2, 3, 1, 0, cs, 0.0, 0.0, 0.0, 1, 6, 40);
  const DenseModel d = three_mirror_dense(p);
  const int Nm = 40;
  for (int nb = 0; nb < 6; ++nb) {
    const Eigen::MatrixXcd block = d.hamiltonian.matrix().block(nb * Nm, nb * Nm, Nm, Nm);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(block).eigenvalues();
    const double spacing = ev[1] - ev[0];
    EXPECT_NEAR(spacing, three_mirror_chi(p, nb), 1e-9);
    if (2 * cs * nb <= 0.01) EXPECT_LE(std::abs(spacing - 1.0), 0.01);
  }
}

TEST(DenseAdapters, RoundTrip) {
  const ExactModel m = spin_half({1.0, 1.2});
  const DenseModel d = dense_from_spectrum(m.spectrum, m.state);
  const ExactModel back = exact_from_dense(d.hamiltonian, d.psi0);
  const PhaseReport a = geometric_phase(m.spectrum, m.state);
  const PhaseReport b = geometric_phase(back.spectrum, back.state);
  EXPECT_EQ(a.tau_exact, b.tau_exact);
  EXPECT_EQ(a.phi_exact, b.phi_exact);
  EXPECT_LT(angle_distance(a.gamma, b.gamma), 1e-12);
}

TEST(DenseAdapters, NonDiagonalMatrix) {
  // sigma_x has eigenvalues +-1; |0> splits evenly between them.
  Eigen::MatrixXcd h(2, 2);
  h << 0, 1, 1, 0;
  Eigen::VectorXcd psi(2);
  psi << 1, 0;
  const ExactModel m = exact_from_dense(DenseHamiltonian(h), psi);
  const PhaseReport r = geometric_phase(m.spectrum, m.state);
  EXPECT_EQ(*r.tau_exact, q(1, 2));
  EXPECT_NEAR(*r.mean_energy, 0.0, 1e-15);
  EXPECT_NEAR(r.gamma, kPi, 1e-12);
}
