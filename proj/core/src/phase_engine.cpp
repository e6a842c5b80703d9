#include "aaphase/phase_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "aaphase/error.hpp"

namespace aaphase {

const char* to_string(CyclicityKind kind) noexcept {
  switch (kind) {
    case CyclicityKind::cyclic: return "cyclic";
    case CyclicityKind::stationary: return "stationary";
    case CyclicityKind::non_cyclic: return "non-cyclic";
  }
  return "unknown";
}

namespace {

// One distinct occupied eigenvalue with the total weight and labels on it.
struct Group {
  std::optional<Rational> exact;
  double value = 0.0;
  double weight = 0.0;
  std::vector<std::string> labels;
};

struct Occupancy {
  std::vector<Group> groups;  // sorted by eigenvalue
  bool all_exact = true;
  std::size_t heaviest = 0;
};

Occupancy occupancy(const Spectrum& spectrum, const StateDecomposition& state) {
  state.check_paired(spectrum);
  Occupancy occ;
  std::map<Rational, std::size_t> exact_index;
  std::map<double, std::size_t> inexact_index;
  double total = 0.0;
  for (const auto& entry : state.entries()) {
    const Level& level = spectrum.at(entry.label);
    const double w = std::norm(entry.amplitude);
    total += w;
    std::size_t index = occ.groups.size();
    if (level.exact) {
      index = exact_index.try_emplace(*level.exact, index).first->second;
    } else {
      index = inexact_index.try_emplace(level.value, index).first->second;
    }
    if (index == occ.groups.size()) occ.groups.push_back(Group{level.exact, level.value, 0.0, {}});
    occ.groups[index].weight += w;
    occ.groups[index].labels.push_back(entry.label);
    occ.all_exact = occ.all_exact && level.exact.has_value();
  }
  if (occ.groups.empty()) throw Error(Errc::invalid_argument, "state has no occupied level");
  for (auto& g : occ.groups) g.weight /= total;
  std::sort(occ.groups.begin(), occ.groups.end(), [](const Group& a, const Group& b) {
    if (a.exact && b.exact) return *a.exact < *b.exact;
    return a.value < b.value;
  });
  occ.heaviest = static_cast<std::size_t>(
      std::max_element(occ.groups.begin(), occ.groups.end(),
                       [](const Group& a, const Group& b) { return a.weight < b.weight; }) -
      occ.groups.begin());
  return occ;
}

Cyclicity classify(const Occupancy& occ) {
  if (occ.groups.size() == 1) return {CyclicityKind::stationary, "single occupied eigenvalue"};
  if (occ.groups.size() == 2) return {CyclicityKind::cyclic, {}};
  for (const auto& g : occ.groups) {
    if (!g.exact) {
      return {CyclicityKind::non_cyclic,
              "incommensurable: eigenvalue of level '" + g.labels.front() + "' is not a rational in the spectrum unit"};
    }
  }
  return {CyclicityKind::cyclic, {}};
}

// LCM of the inverse spacings. Spacings relative to one reference level are
// enough: if L*(a - r) and L*(b - r) are integers, so is L*(a - b).
Rational exact_period_units(const Occupancy& occ) {
  RationalSet inverse_spacings;
  const Rational& ref = *occ.groups.front().exact;
  for (std::size_t i = 1; i < occ.groups.size(); ++i) inverse_spacings.insert((*occ.groups[i].exact - ref).reciprocal());
  return lcm_rationals(inverse_spacings);
}

bool has_zero_level(const Occupancy& occ) {
  return std::any_of(occ.groups.begin(), occ.groups.end(),
                     [](const Group& g) { return g.exact ? g.exact->is_zero() : g.value == 0.0; });
}

// Reduces a count of half-turns x to (-1, 1], i.e. x - 2*ceil((x - 1)/2).
Rational canonical_half_turns(const Rational& x) {
  const BigInt k = ((x - Rational(1)) / Rational(2)).ceil();
  return x - Rational(2 * k);
}

double physical_tau(const Rational& tau_units, const Spectrum& spectrum) {
  return kTwoPi * spectrum.hbar() * tau_units.to_double() / spectrum.unit();
}

// Exact total phase over a return time T (units of 2*pi*hbar/unit).
TotalPhase exact_total_phase(const Occupancy& occ, const Rational& T) {
  TotalPhase out;
  std::optional<Rational> phi;
  if (has_zero_level(occ)) phi = Rational(0);
  for (const auto& g : occ.groups) {
    const Rational turns = Rational(2) * (*g.exact) * T;  // 2*lambda*T
    const Rational candidate = canonical_half_turns(-turns);
    if (!phi) phi = candidate;
    if (candidate != *phi) {
      throw Error(Errc::inconsistent_phase, "total phase differs between occupied levels (" + candidate.str() +
                                                " vs " + phi->str() + " half-turns)");
    }
    const Rational n = (*phi + turns) / Rational(2);
    if (!n.is_integer()) throw Error(Errc::inconsistent_phase, "non-integer branch for level '" + g.labels.front() + "'");
    for (const auto& label : g.labels) out.branch_integers[label] = n.numerator();
  }
  out.exact = *phi;
  out.value = phi->to_double() * kPi;
  return out;
}

TotalPhase inexact_total_phase(const Occupancy& occ, double tau, const Spectrum& spectrum) {
  TotalPhase out;
  const double scale = spectrum.unit() * tau / spectrum.hbar();
  const Group& ref = occ.groups[occ.heaviest];
  out.value = has_zero_level(occ) ? 0.0 : wrap_pi(-ref.value * scale);
  for (const auto& g : occ.groups) {
    const auto n = static_cast<long long>(std::llround((g.value * scale + out.value) / kTwoPi));
    for (const auto& label : g.labels) out.branch_integers[label] = n;
  }
  return out;
}

PhaseReport assemble_exact(const Spectrum& spectrum, const Occupancy& occ, const Rational& T) {
  PhaseReport report;
  report.method = Method::full_spectrum;
  report.stationary = occ.groups.size() == 1;
  const TotalPhase phase = exact_total_phase(occ, T);
  report.tau_exact = T;
  report.tau = physical_tau(T, spectrum);
  report.phi_exact = phase.exact;
  report.phi = phase.value;
  report.branch_integers = phase.branch_integers;

  // gamma/(2*pi) = phi/(2*pi) + T*<lambda>. Splitting T*lambda_k into
  // T*lambda_ref plus the integer T*(lambda_k - lambda_ref) keeps the exact
  // part exact and the weighted part small.
  const Group& ref = occ.groups[occ.heaviest];
  const Rational exact_turns = (*phase.exact / Rational(2) + T * (*ref.exact)).frac();
  double weighted = 0.0;
  double mean = 0.0;
  for (const auto& g : occ.groups) {
    weighted += g.weight * (T * (*g.exact - *ref.exact)).to_double();
    mean += g.weight * g.exact->to_double();
  }
  const double turns = exact_turns.to_double() + weighted;
  report.gamma = report.stationary ? 0.0 : wrap_two_pi(kTwoPi * (turns - std::floor(turns)));
  report.mean_energy = mean * spectrum.unit();
  return report;
}

}  // namespace

Cyclicity check_cyclicality(const Spectrum& spectrum, const StateDecomposition& state) {
  return classify(occupancy(spectrum, state));
}

Period period(const Spectrum& spectrum, const StateDecomposition& state) {
  const Occupancy occ = occupancy(spectrum, state);
  const Cyclicity c = classify(occ);
  if (c.kind == CyclicityKind::non_cyclic) throw Error(Errc::non_cyclic, c.reason);
  if (c.kind == CyclicityKind::stationary) {
    const Group& g = occ.groups.front();
    if (g.exact ? g.exact->is_zero() : g.value == 0.0) {
      throw Error(Errc::no_finite_period, "no finite period: stationary state with zero eigenvalue");
    }
    if (g.exact) {
      const Rational T = g.exact->abs().reciprocal();
      return {T, physical_tau(T, spectrum)};
    }
    return {std::nullopt, kTwoPi * spectrum.hbar() / (std::fabs(g.value) * spectrum.unit())};
  }
  if (occ.all_exact) {
    const Rational T = exact_period_units(occ);
    return {T, physical_tau(T, spectrum)};
  }
  const double gap = std::fabs(occ.groups[1].value - occ.groups[0].value);
  return {std::nullopt, kTwoPi * spectrum.hbar() / (gap * spectrum.unit())};
}

TotalPhase total_phase(const Spectrum& spectrum, const StateDecomposition& state) {
  const Occupancy occ = occupancy(spectrum, state);
  if (occ.groups.size() == 1 && has_zero_level(occ)) {
    TotalPhase out{Rational(0), 0.0, {}};
    for (const auto& label : occ.groups.front().labels) out.branch_integers[label] = 0;
    return out;
  }
  const Period p = period(spectrum, state);
  if (p.exact && occ.all_exact) return exact_total_phase(occ, *p.exact);
  return inexact_total_phase(occ, p.value, spectrum);
}

double mean_energy(const Spectrum& spectrum, const StateDecomposition& state) {
  const Occupancy occ = occupancy(spectrum, state);
  double mean = 0.0;
  for (const auto& g : occ.groups) mean += g.weight * (g.exact ? g.exact->to_double() : g.value);
  return mean * spectrum.unit();
}

PhaseReport geometric_phase(const Spectrum& spectrum, const StateDecomposition& state) {
  const Occupancy occ = occupancy(spectrum, state);
  const Cyclicity c = classify(occ);
  if (c.kind == CyclicityKind::non_cyclic) throw Error(Errc::non_cyclic, c.reason);

  if (c.kind == CyclicityKind::stationary && has_zero_level(occ)) {
    PhaseReport report;
    report.stationary = true;
    const TotalPhase phase = total_phase(spectrum, state);
    report.phi_exact = phase.exact;
    report.phi = phase.value;
    report.branch_integers = phase.branch_integers;
    report.mean_energy = 0.0;
    return report;
  }
  if (occ.all_exact) return assemble_exact(spectrum, occ, *period(spectrum, state).exact);

  // Inexact levels: either a stationary level or the two-level exception.
  PhaseReport report;
  report.stationary = c.kind == CyclicityKind::stationary;
  const Period p = period(spectrum, state);
  const TotalPhase phase = inexact_total_phase(occ, p.value, spectrum);
  report.tau = p.value;
  report.phi = phase.value;
  report.branch_integers = phase.branch_integers;
  const double mean = mean_energy(spectrum, state);
  report.mean_energy = mean;
  report.gamma = report.stationary ? 0.0 : wrap_two_pi(phase.value + p.value * mean / spectrum.hbar());
  return report;
}

PhaseReport geometric_phase_over(const Spectrum& spectrum, const StateDecomposition& state, const Rational& tau_units) {
  if (tau_units.sign() <= 0) throw Error(Errc::invalid_argument, "loop duration must be positive");
  const Occupancy occ = occupancy(spectrum, state);
  const Cyclicity c = classify(occ);
  if (c.kind == CyclicityKind::non_cyclic) throw Error(Errc::non_cyclic, c.reason);
  if (!occ.all_exact) throw Error(Errc::invalid_argument, "loop duration needs an exact spectrum");
  if (!(c.kind == CyclicityKind::stationary && has_zero_level(occ))) {
    const Rational base = *period(spectrum, state).exact;
    const Rational ratio = tau_units / base;
    if (!ratio.is_integer()) {
      throw Error(Errc::invalid_argument,
                  "duration " + tau_units.str() + " is not a multiple of the period " + base.str());
    }
  }
  return assemble_exact(spectrum, occ, tau_units);
}

Spectrum gauge_shift(const Spectrum& spectrum, const Rational& c) {
  std::vector<Level> shifted;
  shifted.reserve(spectrum.levels().size());
  for (const auto& level : spectrum.levels()) {
    if (level.exact) {
      shifted.push_back(Level::exactly(level.label, *level.exact + c));
    } else {
      shifted.push_back(Level::inexact(level.label, level.value + c.to_double()));
    }
  }
  return {spectrum.unit(), std::move(shifted), spectrum.hbar()};
}

double gamma_from_single_eigenvalue_phi(const Rational& lambda, double mean_energy, double phi) {
  if (lambda.is_zero()) {
    throw Error(Errc::invalid_argument, "zero eigenvalue carries no period information; use the phi = 2*pi rule instead");
  }
  return wrap_two_pi(phi * (1.0 - mean_energy / lambda.to_double()));
}

double gamma_from_single_eigenvalue_tau(const Rational& lambda, double mean_energy, double tau, double unit,
                                        double hbar) {
  if (!(tau > 0.0)) throw Error(Errc::invalid_argument, "period must be positive");
  return wrap_two_pi(tau * unit * (mean_energy - lambda.to_double()) / hbar);
}

double phase_for_level(const PhaseReport& report, const std::string& label) {
  if (!report.phi) throw Error(Errc::invalid_argument, "report carries no total phase");
  const auto it = report.branch_integers.find(label);
  if (it == report.branch_integers.end()) throw Error(Errc::state_spectrum_mismatch, "no branch for level '" + label + "'");
  return *report.phi - kTwoPi * it->second.convert_to<double>();
}

}  // namespace aaphase
