#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "aaphase/rational.hpp"

namespace aaphase {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduces an angle to [0, 2*pi).
double wrap_two_pi(double angle);
/// Reduces an angle to (-pi, pi].
double wrap_pi(double angle);
/// Distance between two angles on the circle, in [0, pi].
double angle_distance(double a, double b);

enum class Method {
  full_spectrum,
  single_eigenvalue_phi_known,
  single_eigenvalue_tau_known,
  oracle,
};

const char* to_string(Method method) noexcept;

/// Period, total phase and geometric phase of one cyclic evolution.
///
/// Exact fields use fixed units: `tau_exact` counts periods in units of
/// 2*pi*hbar/unit, `phi_exact` counts half-turns (units of pi) and lies in
/// (-1, 1]. The floating fields are the corresponding physical values.
/// `branch_integers` maps each occupied level label to the integer n with
/// lambda*tau/hbar + phi = 2*pi*n.
struct PhaseReport {
  Method method = Method::full_spectrum;
  bool stationary = false;
  std::optional<Rational> tau_exact;
  std::optional<double> tau;
  std::optional<Rational> phi_exact;
  std::optional<double> phi;
  double gamma = 0.0;
  std::optional<double> mean_energy;
  std::map<std::string, BigInt> branch_integers;
  std::optional<double> fidelity;
  std::optional<double> quadrature_residual;
};

/// Key-value text form, one "key: value" per line in a fixed order. Exact
/// rationals print as "p/q", reals with 17 significant digits, missing
/// optionals as "none". Branch integers print as "branch[<label>]: n".
std::string to_text(const PhaseReport& report);

/// Inverse of to_text(). Throws Errc::parse_error on malformed input.
PhaseReport parse_report(std::string_view text);

}  // namespace aaphase
