#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aaphase/rational.hpp"

namespace aaphase {

/// Options for turning floating-point model parameters into exact rationals.
struct RationalizeOptions {
  std::uint64_t max_denominator = 1'000'000;
  double tolerance = 1e-12;
};

/// One eigenvalue of H, measured in units of the owning spectrum's `unit`.
/// A level is exact when its value is a known rational; an inexact level
/// carries only a floating value (rationalization failed, e.g. sqrt(2)).
struct Level {
  std::string label;
  std::optional<Rational> exact;
  double value = 0.0;

  static Level exactly(std::string label, Rational value);
  static Level inexact(std::string label, double value);
  /// Exact when `value` rationalizes under `options`, inexact otherwise.
  static Level from_real(std::string label, double value, const RationalizeOptions& options = {});

  [[nodiscard]] bool is_exact() const noexcept { return exact.has_value(); }
};

/// Eigenvalue set of a Hamiltonian (or the part of it a state touches).
/// Eigenvalues are in units of `unit`; `hbar` defaults to 1.
class Spectrum {
 public:
  Spectrum(double unit, std::vector<Level> levels, double hbar = 1.0);

  [[nodiscard]] double unit() const noexcept { return unit_; }
  [[nodiscard]] double hbar() const noexcept { return hbar_; }
  [[nodiscard]] const std::vector<Level>& levels() const noexcept { return levels_; }

  /// Throws Errc::state_spectrum_mismatch for an unknown label.
  [[nodiscard]] const Level& at(const std::string& label) const;
  [[nodiscard]] const Level* find(const std::string& label) const noexcept;

 private:
  double unit_;
  double hbar_;
  std::vector<Level> levels_;
};

struct Component {
  std::string label;
  std::complex<double> amplitude;
};

/// Amplitudes of a state over the eigenbasis. Exact-zero amplitudes are
/// dropped at construction so the entries are precisely the occupied levels.
class StateDecomposition {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit StateDecomposition(std::vector<Component> entries);

  [[nodiscard]] const std::vector<Component>& entries() const noexcept { return entries_; }

  /// Throws Errc::state_spectrum_mismatch when a label is missing from `spectrum`.
  void check_paired(const Spectrum& spectrum) const;

 private:
  std::vector<Component> entries_;
};

}  // namespace aaphase
