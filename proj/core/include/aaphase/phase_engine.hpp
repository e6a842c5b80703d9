#pragma once

#include <map>
#include <optional>
#include <string>

#include "aaphase/rational.hpp"
#include "aaphase/report.hpp"
#include "aaphase/spectrum.hpp"

// Period, total phase and Aharonov-Anandan phase of a state under a
// time-independent Hamiltonian, computed from the occupied eigenvalues alone.
//
// With L the least common multiple of the inverse nonzero spacings between
// occupied eigenvalues (all in units of `unit`):
//
//   tau   = 2*pi*hbar * L / unit
//   phi   = 2*pi*(n - lambda*L)              for any occupied lambda
//   gamma = phi + tau * <H> / hbar           (mod 2*pi)
//
// Degenerate eigenvalues are merged before spacings are formed.

namespace aaphase {

enum class CyclicityKind { cyclic, stationary, non_cyclic };

const char* to_string(CyclicityKind kind) noexcept;

struct Cyclicity {
  CyclicityKind kind = CyclicityKind::cyclic;
  std::string reason;
};

/// Stationary when one distinct eigenvalue is occupied. Two distinct occupied
/// eigenvalues are always cyclic; three or more need every occupied level to
/// be exact (an inexact level makes some spacing ratio irrational).
Cyclicity check_cyclicality(const Spectrum& spectrum, const StateDecomposition& state);

struct Period {
  std::optional<Rational> exact;  ///< units of 2*pi*hbar/unit
  double value = 0.0;             ///< physical time
};

/// Throws Errc::non_cyclic for a non-cyclic state and Errc::no_finite_period
/// for a stationary state whose eigenvalue is zero.
Period period(const Spectrum& spectrum, const StateDecomposition& state);

struct TotalPhase {
  std::optional<Rational> exact;  ///< units of pi, in (-1, 1]
  double value = 0.0;             ///< radians, in (-pi, pi]
  std::map<std::string, BigInt> branch_integers;
};

/// Total phase over one period on the canonical branch. A zero occupied
/// eigenvalue forces phi = 0 (mod 2*pi), which also covers the stationary
/// zero-eigenvalue state that has no finite period.
TotalPhase total_phase(const Spectrum& spectrum, const StateDecomposition& state);

/// <Psi|H|Psi> in physical energy units.
double mean_energy(const Spectrum& spectrum, const StateDecomposition& state);

/// Full-spectrum route. Stationary states report gamma = 0 with the
/// `stationary` flag set.
PhaseReport geometric_phase(const Spectrum& spectrum, const StateDecomposition& state);

/// Same as geometric_phase() but over the loop traversed in `tau_units`
/// (units of 2*pi*hbar/unit), which must be a positive integer multiple of
/// the period. Throws Errc::invalid_argument otherwise.
PhaseReport geometric_phase_over(const Spectrum& spectrum, const StateDecomposition& state, const Rational& tau_units);

/// Adds c (units of `unit`) to every eigenvalue.
Spectrum gauge_shift(const Spectrum& spectrum, const Rational& c);

/// gamma = phi * (1 - <H>/lambda) mod 2*pi, with phi the total phase in the
/// gauge where lambda*tau/hbar = -phi. `lambda` and `mean_energy` share units.
/// Throws Errc::invalid_argument when lambda is zero.
double gamma_from_single_eigenvalue_phi(const Rational& lambda, double mean_energy, double phi);

/// gamma = (tau/hbar) * (<H> - lambda) mod 2*pi, with energies in units of
/// `unit` and tau a physical time. Throws Errc::invalid_argument for tau <= 0.
double gamma_from_single_eigenvalue_tau(const Rational& lambda, double mean_energy, double tau, double unit = 1.0,
                                        double hbar = 1.0);

/// Total phase unwrapped for one occupied level: phi - 2*pi*n = -lambda*tau/hbar.
/// This is the phase that gamma_from_single_eigenvalue_phi() expects.
double phase_for_level(const PhaseReport& report, const std::string& label);

}  // namespace aaphase
