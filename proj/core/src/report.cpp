#include "aaphase/report.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "aaphase/error.hpp"
#include "aaphase/text.hpp"

namespace aaphase {

double wrap_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double wrap_pi(double angle) {
  double r = wrap_two_pi(angle);
  if (r > kPi) r -= kTwoPi;
  return r;
}

double angle_distance(double a, double b) { return std::fabs(wrap_pi(a - b)); }

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::full_spectrum: return "full-spectrum";
    case Method::single_eigenvalue_phi_known: return "single-eigenvalue-phi-known";
    case Method::single_eigenvalue_tau_known: return "single-eigenvalue-tau-known";
    case Method::oracle: return "oracle";
  }
  return "unknown";
}

namespace {

template <typename T, typename F>
std::string or_none(const std::optional<T>& value, F&& format) {
  return value ? format(*value) : std::string("none");
}

Method parse_method(const std::string& text) {
  for (Method m : {Method::full_spectrum, Method::single_eigenvalue_phi_known, Method::single_eigenvalue_tau_known,
                   Method::oracle}) {
    if (text == to_string(m)) return m;
  }
  throw Error(Errc::parse_error, "unknown method '" + text + "'");
}

std::optional<double> parse_optional_real(const std::string& text) {
  if (text == "none") return std::nullopt;
  return parse_real(text);
}

std::optional<Rational> parse_optional_rational(const std::string& text) {
  if (text == "none") return std::nullopt;
  return Rational::parse(text);
}

}  // namespace

std::string to_text(const PhaseReport& report) {
  const auto real = [](double v) { return format_real(v); };
  const auto rat = [](const Rational& r) { return r.str(); };
  std::ostringstream out;
  out << "method: " << to_string(report.method) << '\n';
  out << "stationary: " << (report.stationary ? "true" : "false") << '\n';
  out << "tau_units: " << or_none(report.tau_exact, rat) << '\n';
  out << "tau: " << or_none(report.tau, real) << '\n';
  out << "phi_units: " << or_none(report.phi_exact, rat) << '\n';
  out << "phi: " << or_none(report.phi, real) << '\n';
  out << "gamma: " << format_real(report.gamma) << '\n';
  out << "mean_energy: " << or_none(report.mean_energy, real) << '\n';
  out << "fidelity: " << or_none(report.fidelity, real) << '\n';
  out << "quadrature_residual: " << or_none(report.quadrature_residual, real) << '\n';
  for (const auto& [label, n] : report.branch_integers) out << "branch[" << label << "]: " << n.str() << '\n';
  return out.str();
}

PhaseReport parse_report(std::string_view text) {
  PhaseReport report;
  std::istringstream in{std::string(text)};
  std::string line;
  bool saw_gamma = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw Error(Errc::parse_error, "report line without 'key: value': " + line);
    const std::string key = line.substr(0, colon);
    const std::string value = line.substr(colon + 2);
    if (key == "method") {
      report.method = parse_method(value);
    } else if (key == "stationary") {
      if (value != "true" && value != "false") throw Error(Errc::parse_error, "bad stationary flag: " + value);
      report.stationary = value == "true";
    } else if (key == "tau_units") {
      report.tau_exact = parse_optional_rational(value);
    } else if (key == "tau") {
      report.tau = parse_optional_real(value);
    } else if (key == "phi_units") {
      report.phi_exact = parse_optional_rational(value);
    } else if (key == "phi") {
      report.phi = parse_optional_real(value);
    } else if (key == "gamma") {
      report.gamma = parse_real(value);
      saw_gamma = true;
    } else if (key == "mean_energy") {
      report.mean_energy = parse_optional_real(value);
    } else if (key == "fidelity") {
      report.fidelity = parse_optional_real(value);
    } else if (key == "quadrature_residual") {
      report.quadrature_residual = parse_optional_real(value);
    } else if (key.starts_with("branch[") && key.ends_with("]")) {
      report.branch_integers[key.substr(7, key.size() - 8)] = Rational::parse(value).numerator();
    } else {
      throw Error(Errc::parse_error, "unknown report key '" + key + "'");
    }
  }
  if (!saw_gamma) throw Error(Errc::parse_error, "report has no gamma");
  return report;
}

}  // namespace aaphase
