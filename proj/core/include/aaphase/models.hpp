#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "aaphase/oracle.hpp"
#include "aaphase/rational.hpp"
#include "aaphase/spectrum.hpp"

// Example systems. Every model comes in two forms: an exact (Spectrum,
// StateDecomposition) pair for the spectral engine and a truncated dense
// Hamiltonian with the same initial state for the oracle. hbar = 1.

namespace aaphase {

using Complex = std::complex<double>;

struct ExactModel {
  Spectrum spectrum;
  StateDecomposition state;
};

struct DenseModel {
  DenseHamiltonian hamiltonian;
  Eigen::VectorXcd psi0;
};

/// Diagonal dense form of an exact model, levels in spectrum order.
DenseModel dense_from_spectrum(const Spectrum& spectrum, const StateDecomposition& state);

/// Spectrum of a dense Hamiltonian seen by psi0: eigenvalues closer than
/// `degeneracy` (relative to the largest magnitude) are merged, each level
/// "e<k>" is rationalized when possible and carries the projection norm of
/// psi0 onto its eigenspace.
ExactModel exact_from_dense(const DenseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi0,
                            const RationalizeOptions& options = {}, double degeneracy = 1e-9);

inline constexpr double kTailMassLimit = 1e-10;

struct CoherentExpansion {
  std::vector<Complex> amplitudes;  ///< renormalized, n = 0 .. truncation-1
  double tail_mass = 0.0;           ///< Poisson weight of n >= truncation before renormalization
};

/// Fock amplitudes of |alpha> on `truncation` levels. Throws
/// Errc::truncation_too_small when the dropped tail weighs >= 1e-10.
CoherentExpansion coherent_amplitudes(Complex alpha, int truncation);

/// Fock amplitudes of D(d)|state> on `truncation` levels, with
/// D(d) = exp(d c^dagger - d* c). Same tail-mass rule as coherent_amplitudes().
CoherentExpansion displaced_amplitudes(const std::vector<Complex>& state, Complex d, int truncation);

// Spin-1/2 in a constant field, H = -mu_B0 sigma_z.

struct SpinHalfParams {
  double mu_B0 = 1.0;
  double theta = 0.0;  ///< in [0, pi]; state (cos theta/2, sin theta/2)
};

/// Levels "up" = -1 and "down" = +1 in units of mu_B0.
ExactModel spin_half(const SpinHalfParams& params);
DenseModel spin_half_dense(const SpinHalfParams& params);
/// pi * (1 - cos theta) mod 2*pi.
double spin_half_gamma_closed_form(const SpinHalfParams& params);

// Free field, H = omega a^dagger a.

struct FockAmplitude {
  int n = 0;
  Complex amplitude;
};

struct FreeFieldParams {
  double omega = 1.0;
  std::vector<FockAmplitude> amplitudes;  ///< normalized
};

/// Levels "n=<k>" with eigenvalue k in units of omega, for k up to the
/// largest occupied number.
ExactModel free_field(const FreeFieldParams& params);
DenseModel free_field_dense(const FreeFieldParams& params);
FreeFieldParams free_field_coherent(double omega, Complex alpha, int truncation);

// Two-mirror optomechanical cavity:
//   H = omega_f a^dagger a + omega_m b^dagger b - g a^dagger a (b + b^dagger)
// with r = omega_f/omega_m and k = g/omega_m. At fixed photon number n the
// mirror is a displaced oscillator, so the eigenvalues are
//   lambda_{n,m} = omega_m (r n + m - k^2 n^2).

struct TwoMirrorParams {
  double omega_m = 1.0;
  Rational r;
  Rational k2;                          ///< k^2, k = +sqrt(k2)
  std::vector<Complex> field_amplitudes;  ///< C_n, n = 0 .. N_f-1
  Complex beta;
  int mirror_truncation = 40;

  [[nodiscard]] double k() const;
  [[nodiscard]] double omega_f() const;
  [[nodiscard]] double g() const;
};

/// Levels "n,m" in units of omega_m. Amplitudes C_n exp(i k n Im beta) <m|beta - k n>.
ExactModel two_mirror_spectrum(const TwoMirrorParams& params);
/// Fock basis index n * mirror_truncation + m, entries in units of omega_m.
DenseModel two_mirror_dense(const TwoMirrorParams& params);
/// <H> = omega_m [(r - 2k Re beta) <n>_f + |beta|^2].
double two_mirror_mean_energy(const TwoMirrorParams& params);
/// gamma = 2*pi [1 + p (r - 2k Re beta) <n>_f + p |beta|^2] mod 2*pi.
double two_mirror_gamma_closed_form(const TwoMirrorParams& params, int p);
/// The same expression with p replaced by p/omega_m. Dimensionally
/// inconsistent; kept only so that its mismatch can be demonstrated.
double two_mirror_gamma_printed_form(const TwoMirrorParams& params, int p);

// Three-mirror cavity with a movable middle mirror:
//   H = omega_D a^dagger a + omega_S b^dagger b + C_D a^dagger a (c + c^dagger)
//       + (omega_m + C_S b^dagger b) c^dagger c + (C_S/2) b^dagger b (1 + c^2 + c^dagger^2)

struct ThreeMirrorParams {
  double omega_D = 1.0;
  double omega_S = 1.0;
  double omega_m = 1.0;
  double C_D = 0.0;
  double C_S = 0.0;
  std::vector<Complex> A;  ///< field a amplitudes
  std::vector<Complex> B;  ///< field b amplitudes
  std::vector<Complex> M;  ///< mirror amplitudes
};

ThreeMirrorParams three_mirror_coherent(double omega_D, double omega_S, double omega_m, double C_D, double C_S,
                                        Complex alpha, Complex beta, Complex mu, int truncation_a = 15,
                                        int truncation_b = 15, int truncation_m = 25);

/// Basis index (n_a * N_b + n_b) * N_m + n_c, entries in units of omega_m.
DenseModel three_mirror_dense(const ThreeMirrorParams& params);

/// Exact levels "n_a,n_b,n_c" (units of omega_m) for C_S = 0:
///   lambda = (omega_D n_a + omega_S n_b)/omega_m + n_c - (C_D/omega_m)^2 n_a^2.
/// The frequency ratios and (C_D/omega_m)^2 are rationalized; levels other
/// than |0 0 n> become inexact when that fails. Throws
/// Errc::incommensurable_input for C_S != 0.
ExactModel three_mirror_spectrum(const ThreeMirrorParams& params, const RationalizeOptions& options = {});

/// Mirror frequency within the block of n_b photons: sqrt(omega_m (omega_m + 2 C_S n_b)).
double three_mirror_chi(const ThreeMirrorParams& params, int n_b);

/// <H> from the amplitude lists.
double three_mirror_mean_energy(const ThreeMirrorParams& params);
/// General product-state closed form with mirror cross terms
/// Re(M_n^* M_{n+1}) and Re(M_n^* M_{n+2}).
double three_mirror_gamma_closed_form(const ThreeMirrorParams& params, int p);
/// Coherent-product closed form:
///   2*pi [1 + p|alpha|^2 (omega_D/omega_m + 2 (C_D/omega_m) Re mu)
///          + p|beta|^2 (omega_S/omega_m + (C_S/omega_m)(1/2 + 2 (Re mu)^2)) + p|mu|^2].
double three_mirror_gamma_coherent(const ThreeMirrorParams& params, Complex alpha, Complex beta, Complex mu, int p);

}  // namespace aaphase
