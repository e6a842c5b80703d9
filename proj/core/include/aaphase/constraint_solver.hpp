#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aaphase/rational.hpp"
#include "aaphase/spectrum.hpp"

// Partial-spectrum analysis: with two known occupied eigenvalues L1 != L2 and
// the assumption that the motion is cyclic, every admissible (phi, tau) pair
// has the form
//
//   phi = 2*pi*(L1*m - L2*n)/(L1 - L2),   tau = 2*pi*hbar*(n - m)/(L1 - L2)
//
// for integers n, m. Shifting the spectrum so that phi = 0 turns the
// remaining occupied eigenvalues into a lattice: L_k * n = L1 * k'.

namespace aaphase {

/// Known part of the occupied spectrum. Eigenvalues in units of `unit`.
class PartialSpectrum {
 public:
  PartialSpectrum(double unit, std::vector<Level> known);

  [[nodiscard]] double unit() const noexcept { return unit_; }
  [[nodiscard]] const std::vector<Level>& known() const noexcept { return known_; }

 private:
  double unit_;
  std::vector<Level> known_;
};

/// One admissible (phi, tau). `phi` is the raw value of the formula above in
/// units of pi; `phi_canonical` is the same angle reduced to (-1, 1].
/// `tau` is in units of 2*pi*hbar/unit and always positive.
struct CyclicityCandidate {
  BigInt n;
  BigInt m;
  Rational phi;
  Rational phi_canonical;
  Rational tau;
};

inline constexpr int kDefaultNRange = 16;

/// Candidates from the first two known eigenvalues with |n|, |m| <= n_range,
/// one per distinct (phi mod 2*pi, tau), sorted by tau then |n| + |m|. The
/// representative of each class is the one whose raw phi is already
/// canonical when that (n, m) lies in range, otherwise the one with the
/// smallest |n| + |m|.
///
/// Throws Errc::invalid_argument with fewer than two known levels or equal
/// eigenvalues, Errc::non_cyclic when either eigenvalue is not exact (their
/// ratio is then irrational and no cyclic motion is possible).
std::vector<CyclicityCandidate> enumerate_candidates(const PartialSpectrum& spectrum, int n_range = kDefaultNRange);

/// A candidate moved to the gauge with phi = 0.
struct GaugeFixedCandidate {
  CyclicityCandidate candidate;
  Rational shift;     ///< added to every eigenvalue, units of `unit`
  Rational lambda1;   ///< first known eigenvalue after the shift
  Rational tau;       ///< units of 2*pi*hbar/unit; equals n / lambda1 when lambda1 != 0
};

GaugeFixedCandidate gauge_to_zero_phi(const CyclicityCandidate& candidate, const PartialSpectrum& spectrum);

/// True iff trial (given in the original gauge) can be an occupied
/// eigenvalue: (trial + shift) * n = lambda1 * k' for some integer k'.
bool constrain_unknown(const GaugeFixedCandidate& fixed, const Rational& trial);

/// gamma = 2*pi*(n/lambda1)*<H> mod 2*pi, with <H> given in the original
/// gauge and in units of `unit`.
double gamma_for_candidate(const GaugeFixedCandidate& fixed, double mean_energy);

/// Distinct values of gamma/(2*pi) = frac(n * ratio) for n in `branches`,
/// where ratio = <H>/lambda1 is rational. Sorted ascending, values in [0, 1).
std::vector<Rational> gamma_candidates(const Rational& mean_over_lambda1, const std::vector<BigInt>& branches);

}  // namespace aaphase
