#include "aaphase/spectrum.hpp"

#include <cmath>
#include <set>

#include "aaphase/error.hpp"
#include "aaphase/text.hpp"

namespace aaphase {

Level Level::exactly(std::string label, Rational value) {
  const double approx = value.to_double();
  return Level{std::move(label), std::move(value), approx};
}

Level Level::inexact(std::string label, double value) {
  if (!std::isfinite(value)) throw Error(Errc::invalid_argument, "non-finite eigenvalue for level '" + label + "'");
  return Level{std::move(label), std::nullopt, value};
}

Level Level::from_real(std::string label, double value, const RationalizeOptions& options) {
  try {
    return exactly(std::move(label), rationalize(value, options.max_denominator, options.tolerance));
  } catch (const Error& e) {
    if (e.code() != Errc::incommensurable_input) throw;
  }
  return inexact(std::move(label), value);
}

Spectrum::Spectrum(double unit, std::vector<Level> levels, double hbar)
    : unit_(unit), hbar_(hbar), levels_(std::move(levels)) {
  if (!(unit_ > 0.0) || !std::isfinite(unit_)) throw Error(Errc::invalid_argument, "spectrum unit must be positive");
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw Error(Errc::invalid_argument, "hbar must be positive");
  if (levels_.empty()) throw Error(Errc::invalid_argument, "spectrum needs at least one level");
  std::set<std::string> seen;
  for (const auto& level : levels_) {
    if (!seen.insert(level.label).second) throw Error(Errc::invalid_argument, "duplicate level label '" + level.label + "'");
  }
}

const Level* Spectrum::find(const std::string& label) const noexcept {
  for (const auto& level : levels_) {
    if (level.label == label) return &level;
  }
  return nullptr;
}

const Level& Spectrum::at(const std::string& label) const {
  const Level* level = find(label);
  if (level == nullptr) throw Error(Errc::state_spectrum_mismatch, "state/spectrum mismatch: no level '" + label + "'");
  return *level;
}

StateDecomposition::StateDecomposition(std::vector<Component> entries) {
  std::set<std::string> seen;
  double norm = 0.0;
  for (auto& entry : entries) {
    if (!seen.insert(entry.label).second) {
      throw Error(Errc::invalid_argument, "duplicate state label '" + entry.label + "'");
    }
    if (entry.amplitude == std::complex<double>{}) continue;
    norm += std::norm(entry.amplitude);
    entries_.push_back(std::move(entry));
  }
  if (std::fabs(norm - 1.0) > kNormTolerance) {
    throw Error(Errc::invalid_argument, "state is not normalized (norm^2 = " + format_real(norm) + ")");
  }
}

void StateDecomposition::check_paired(const Spectrum& spectrum) const {
  for (const auto& entry : entries_) (void)spectrum.at(entry.label);
}

}  // namespace aaphase
