#pragma once

#include <iosfwd>
#include <string_view>

#include "aaphase/error.hpp"
#include "aaphase_cli/config.hpp"

namespace aaphase::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitNonCyclic = 2,
  kExitNoReturn = 3,
  kExitUsage = 64,
};

int exit_code_for(Errc code) noexcept;

/// Writes one section per case: "[case <name>]", the cyclicity verdict and
/// the phase report. Non-cyclic cases end the run with kExitNonCyclic.
int run_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Exact route against the oracle, as a CSV table
/// case,quantity,expected,observed,abs_diff,tolerance,status.
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Candidate table, trial admissibility and the gamma set for a partial spectrum.
int run_constrain(const RunConfig& config, std::ostream& out, std::ostream& err);

int run_command(std::string_view command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace aaphase::cli
