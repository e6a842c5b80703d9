#include "aaphase_cli/commands.hpp"

#include <cmath>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aaphase/oracle.hpp"
#include "aaphase/phase_engine.hpp"
#include "aaphase/report.hpp"
#include "aaphase/text.hpp"

namespace aaphase::cli {

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::non_cyclic:
    case Errc::incommensurable_input: return kExitNonCyclic;
    case Errc::no_period_detected: return kExitNoReturn;
    default: return kExitUsage;
  }
}

namespace {

struct Row {
  std::string quantity;
  std::string expected;
  std::string observed;
  std::string diff;
  double tolerance = 0.0;
  bool pass = false;
};

OracleOptions oracle_options(const Case& c, const RunOptions& options, const std::optional<PhaseReport>& exact) {
  OracleOptions o;
  o.fidelity_tol = options.fidelity_tol.value_or(c.approximate ? kApproximateFidelityTolerance
                                                                : kDefaultFidelityTolerance);
  o.points_per_period = options.points_per_period;
  if (options.t_max) {
    o.t_max = *options.t_max;
  } else if (exact && exact->tau) {
    o.t_max = 1.5 * *exact->tau;
  } else {
    const DenseHamiltonian& h = c.dense->hamiltonian;
    o.t_max = 1.5 * c.closed_form_p * kTwoPi * h.hbar() / h.unit();
  }
  return o;
}

std::string flag(bool b) { return b ? "true" : "false"; }

Row angle_row(std::string quantity, double expected, double observed, double tol) {
  const double d = angle_distance(expected, observed);
  return {std::move(quantity), format_real(expected), format_real(observed), format_real(d), tol, d <= tol};
}

void write_rows(std::ostream& out, const std::string& name, const std::vector<Row>& rows) {
  for (const auto& r : rows) {
    out << name << ',' << r.quantity << ',' << r.expected << ',' << r.observed << ',' << r.diff << ','
        << format_real(r.tolerance) << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
}

}  // namespace

int run_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.cases.empty()) {
    err << "analyze needs a model section (spin_half, free_field, two_mirror, three_mirror, raw_spectrum, dense_matrix)\n";
    return kExitUsage;
  }
  int code = kExitOk;
  for (const Case& c : config.cases) {
    out << "[case " << c.name << "]\n";
    if (!c.exact) {
      out << "cyclicity: approximate\n";
      const PhaseReport report = generic_gamma(c.dense->hamiltonian, c.dense->psi0, oracle_options(c, config.options, {}));
      out << to_text(report);
      continue;
    }
    const Cyclicity cyc = check_cyclicality(c.exact->spectrum, c.exact->state);
    out << "cyclicity: " << to_string(cyc.kind) << '\n';
    if (cyc.kind == CyclicityKind::non_cyclic) {
      out << "reason: " << cyc.reason << '\n';
      err << c.name << ": " << cyc.reason << '\n';
      code = kExitNonCyclic;
      continue;
    }
    out << to_text(geometric_phase(c.exact->spectrum, c.exact->state));
  }
  return code;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.cases.empty()) {
    err << "verify needs a model section\n";
    return kExitUsage;
  }
  const double tol = config.options.tolerance;
  bool all_pass = true;
  out << "case,quantity,expected,observed,diff,tolerance,status\n";
  for (const Case& c : config.cases) {
    std::optional<PhaseReport> exact;
    if (c.exact) {
      const Cyclicity cyc = check_cyclicality(c.exact->spectrum, c.exact->state);
      if (cyc.kind == CyclicityKind::non_cyclic) {
        err << c.name << ": " << cyc.reason << '\n';
        return kExitNonCyclic;
      }
      exact = geometric_phase(c.exact->spectrum, c.exact->state);
    }
    const PhaseReport oracle = generic_gamma(c.dense->hamiltonian, c.dense->psi0, oracle_options(c, config.options, exact));

    std::vector<Row> rows;
    if (exact) {
      if (exact->stationary || oracle.stationary) {
        const bool same = exact->stationary == oracle.stationary;
        rows.push_back({"stationary", flag(exact->stationary), flag(oracle.stationary), same ? "0" : "1", 0.0, same});
      } else {
        const double rel = std::abs(*oracle.tau - *exact->tau) / *exact->tau;
        rows.push_back({"tau", format_real(*exact->tau), format_real(*oracle.tau), format_real(rel), tol, rel <= tol});
        rows.push_back(angle_row("phi", *exact->phi, *oracle.phi, tol));
      }
      rows.push_back(angle_row("gamma", exact->gamma, oracle.gamma, tol));
    }
    if (c.closed_form) {
      if (!exact) {
        rows.push_back(angle_row(c.closed_form_label, *c.closed_form, oracle.gamma, tol));
      } else if (!c.closed_form_loop) {
        rows.push_back(angle_row(c.closed_form_label, *c.closed_form, exact->gamma, tol));
      } else {
        try {
          const PhaseReport loop = geometric_phase_over(c.exact->spectrum, c.exact->state, *c.closed_form_loop);
          rows.push_back(angle_row(c.closed_form_label, *c.closed_form, loop.gamma, tol));
        } catch (const Error& e) {
          if (e.code() != Errc::invalid_argument) throw;
          err << c.name << ": " << e.what() << '\n';
          rows.push_back({c.closed_form_label, format_real(*c.closed_form), "none", "none", tol, false});
        }
      }
    }
    for (const auto& r : rows) all_pass = all_pass && r.pass;
    write_rows(out, c.name, rows);
  }
  return all_pass ? kExitOk : kExitVerifyFailed;
}

int run_constrain(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.partial.spectrum) {
    err << "constrain needs a 'partial_spectrum' section\n";
    return kExitUsage;
  }
  const PartialSpectrum& ps = *config.partial.spectrum;
  if (ps.known().size() < 2) {
    err << "constrain needs at least two known eigenvalues\n";
    return kExitUsage;
  }
  const auto candidates = enumerate_candidates(ps, config.options.n_range);
  const auto& mean = config.partial.mean_energy;

  std::set<Rational> gamma_set;
  out << "# candidates (phi in units of pi, tau in units of 2*pi*hbar/unit, gamma_over_2pi in [0, 1))\n";
  out << "n,m,phi,phi_canonical,tau,gamma_over_2pi,gamma\n";
  for (const auto& c : candidates) {
    const GaugeFixedCandidate fixed = gauge_to_zero_phi(c, ps);
    out << c.n << ',' << c.m << ',' << c.phi.str() << ',' << c.phi_canonical.str() << ',' << c.tau.str() << ',';
    if (mean) {
      const Rational g = (fixed.tau * (*mean + fixed.shift)).frac();
      gamma_set.insert(g);
      out << g.str() << ',' << format_real(kTwoPi * g.to_double()) << '\n';
    } else {
      out << "none,none\n";
    }
  }
  if (!candidates.empty() && !config.partial.trials.empty()) {
    const GaugeFixedCandidate fixed = gauge_to_zero_phi(candidates.front(), ps);
    out << "# trials against the minimal-period candidate n=" << fixed.candidate.n << ", m=" << fixed.candidate.m
        << '\n';
    out << "trial,admissible\n";
    for (const auto& t : config.partial.trials) out << t.str() << ',' << flag(constrain_unknown(fixed, t)) << '\n';
  }
  if (mean) {
    out << "# gamma_set (units of 2*pi)\n";
    for (const auto& g : gamma_set) out << g.str() << '\n';
  }
  return kExitOk;
}

int run_command(std::string_view command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (command == "analyze") return run_analyze(config, out, err);
  if (command == "verify") return run_verify(config, out, err);
  if (command == "constrain") return run_constrain(config, out, err);
  err << "unknown command '" << command << "'\n";
  return kExitUsage;
}

}  // namespace aaphase::cli
