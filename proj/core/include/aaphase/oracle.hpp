#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "aaphase/report.hpp"

// Brute-force reference for the spectral engine: explicit time evolution
// under a dense Hermitian matrix, numerical detection of the first return,
// and the dynamical phase as a quadrature of <Psi(t)|H|Psi(t)>.

namespace aaphase {

/// Hermitian matrix H on a finite (or truncated) Hilbert space. Physical
/// energies are `unit` times the matrix entries.
class DenseHamiltonian {
 public:
  static constexpr double kHermitianTolerance = 1e-12;

  /// Throws Errc::non_hermitian when max|H - H^dagger| > 1e-12 * max|H|.
  explicit DenseHamiltonian(Eigen::MatrixXcd matrix, double unit = 1.0, double hbar = 1.0);

  [[nodiscard]] Eigen::Index dimension() const noexcept { return matrix_.rows(); }
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  [[nodiscard]] double unit() const noexcept { return unit_; }
  [[nodiscard]] double hbar() const noexcept { return hbar_; }

  /// Text form:
  ///   dimension <n>
  ///   unit <real>        (optional, default 1)
  ///   hbar <real>        (optional, default 1)
  /// followed by n*n complex entries in row-major order. '#' starts a comment.
  static DenseHamiltonian read(std::istream& in);
  void write(std::ostream& out) const;

 private:
  Eigen::MatrixXcd matrix_;
  double unit_;
  double hbar_;
};

/// <psi|H|psi> in physical energy units.
double mean_energy(const DenseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi);

/// Exact propagator U(t) = exp(-i H t / hbar) applied to one initial state.
/// H is diagonalized once; invariant subspaces (connected components of the
/// nonzero pattern) are diagonalized separately.
class Propagator {
 public:
  static constexpr double kOccupationFloor = 1e-14;

  Propagator(const DenseHamiltonian& hamiltonian, Eigen::VectorXcd psi0);

  [[nodiscard]] const Eigen::VectorXcd& initial_state() const noexcept { return psi0_; }
  [[nodiscard]] Eigen::VectorXcd state(double t) const;
  /// <psi(0)|psi(t)> from the occupied eigencomponents.
  [[nodiscard]] std::complex<double> overlap(double t) const;
  /// <psi|H|psi> (physical units) for an arbitrary vector, applying H blockwise.
  [[nodiscard]] double energy(const Eigen::VectorXcd& psi) const;

  /// Angular frequencies unit*lambda/hbar and weights |<phi_k|psi0>|^2 of
  /// every eigencomponent with weight above kOccupationFloor.
  [[nodiscard]] const std::vector<double>& frequencies() const noexcept { return freqs_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  /// Spread of the occupied angular frequencies.
  [[nodiscard]] double bandwidth() const noexcept;
  [[nodiscard]] bool stationary() const noexcept;
  [[nodiscard]] std::size_t block_count() const noexcept { return blocks_.size(); }

 private:
  struct Block {
    std::vector<Eigen::Index> indices;
    Eigen::MatrixXcd matrix;
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
    Eigen::VectorXcd coefficients;
  };

  Eigen::VectorXcd psi0_;
  double unit_;
  double hbar_;
  std::vector<Block> blocks_;
  std::vector<double> freqs_;
  std::vector<double> weights_;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;  ///< empty unless requested
  std::vector<std::complex<double>> overlaps;
  std::vector<double> fidelity_track;    ///< |<psi(0)|psi(t)>|
  std::shared_ptr<const Propagator> propagator;
};

/// Uniform grid of `steps` points on [0, t_max]. Throws Errc::invalid_argument
/// for an unnormalized psi0 (1e-10) or steps < 2.
EvolutionResult evolve(const DenseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi0, double t_max, int steps,
                       bool store_states = true);

struct PeriodEstimate {
  double tau = 0.0;
  double phi = 0.0;       ///< arg <psi(0)|psi(tau)>, in (-pi, pi]
  double fidelity = 1.0;  ///< |<psi(0)|psi(tau)>| at the refined return
  bool stationary = false;
};

inline constexpr double kDefaultFidelityTolerance = 1e-8;
inline constexpr double kApproximateFidelityTolerance = 1e-4;
inline constexpr int kDefaultGoldenIterations = 20;

/// First revival: the first local maximum of the fidelity track (after the
/// initial decay) whose golden-section refinement reaches
/// 1 - fidelity <= fidelity_tol. A stationary state returns the first positive grid
/// point. Throws Errc::no_period_detected when no grid peak qualifies.
PeriodEstimate detect_period(const EvolutionResult& result, double fidelity_tol = kDefaultFidelityTolerance,
                             int golden_iterations = kDefaultGoldenIterations);

/// phi_dyn = -(1/hbar) * integral_0^tau <psi(t)|H|psi(t)> dt by composite
/// Simpson with `intervals` (even) panels, states taken from the propagator.
double dynamical_phase(const DenseHamiltonian& hamiltonian, const EvolutionResult& result, double tau,
                       int intervals = 512);

struct OracleOptions {
  double t_max = 0.0;                         ///< required, > 0
  double fidelity_tol = kDefaultFidelityTolerance;
  int points_per_period = 4096;               ///< grid density per fastest occupied oscillation
  int golden_iterations = kDefaultGoldenIterations;
  int simpson_intervals = 512;
  long long max_steps = 40'000'000;
};

/// Generic route: tau and phi from the detected return, gamma = phi - phi_dyn
/// reduced to [0, 2*pi). `quadrature_residual` is the relative mismatch
/// between the quadrature and tau*<H(0)>/hbar.
PhaseReport generic_gamma(const DenseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi0,
                          const OracleOptions& options);

}  // namespace aaphase
