#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "aaphase/error.hpp"
#include "aaphase/report.hpp"
#include "aaphase_cli/commands.hpp"
#include "aaphase_cli/config.hpp"

using namespace aaphase;
using namespace aaphase::cli;

namespace {

const std::filesystem::path kConfigs = AAPHASE_CLI_CONFIG_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::string_view command, const RunConfig& config) {
  std::ostringstream out, err;
  const int code = run_command(command, config, out, err);
  return {code, out.str(), err.str()};
}

CliRun run_file(std::string_view command, const char* file) { return run(command, load_config(kConfigs / file)); }

// Report body of the single case in an analyze run.
PhaseReport analyze_report(const std::string& out) {
  const auto first = out.find('\n', out.find("cyclicity:"));
  return parse_report(out.substr(first + 1));
}

Errc parse_error_code(std::string_view yaml) {
  try {
    parse_config(yaml);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "config accepted: " << yaml;
  return Errc::invalid_argument;
}

}  // namespace

TEST(CliAnalyze, SpinHalfQuarterTurn) {
  const CliRun r = run_file("analyze", "spin_half.yaml");
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("cyclicity: cyclic"), std::string::npos);
  const PhaseReport report = analyze_report(r.out);
  EXPECT_NEAR(report.gamma, kPi, 1e-15);
  EXPECT_EQ(report.tau_exact, Rational(BigInt(1), BigInt(2)));
}

TEST(CliAnalyze, RawCommensurable) {
  const CliRun r = run_file("analyze", "raw_commensurable.yaml");
  EXPECT_EQ(r.code, kExitOk);
  const PhaseReport report = analyze_report(r.out);
  EXPECT_EQ(report.phi_exact, Rational(0));
  EXPECT_EQ(report.tau_exact, Rational(1));
}

TEST(CliAnalyze, IrrationalLevelIsNonCyclic) {
  const CliRun r = run_file("analyze", "raw_sqrt2.yaml");
  EXPECT_EQ(r.code, kExitNonCyclic);
  EXPECT_NE(r.out.find("incommensurable"), std::string::npos);
  EXPECT_NE(r.err.find("incommensurable"), std::string::npos);
}

TEST(CliAnalyze, DenseMatrixFile) {
  const CliRun r = run_file("analyze", "dense_diag23.yaml");
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NEAR(analyze_report(r.out).gamma, kPi, 1e-9);
}

TEST(CliAnalyze, Deterministic) {
  const RunConfig c = load_config(kConfigs / "two_mirror.yaml");
  EXPECT_EQ(run("analyze", c).out, run("analyze", c).out);
  EXPECT_EQ(run("verify", c).out, run("verify", c).out);
}

TEST(CliVerify, SpinSweepPasses) {
  const CliRun r = run_file("verify", "spin_sweep.yaml");
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(r.out.find(",fail"), std::string::npos);
}

TEST(CliVerify, TwoMirrorPasses) {
  const CliRun r = run_file("verify", "two_mirror.yaml");
  EXPECT_EQ(r.code, kExitOk) << r.out;
}

TEST(CliVerify, WrongLoopLengthFails) {
  const CliRun r = run_file("verify", "two_mirror_wrong_p.yaml");
  EXPECT_EQ(r.code, kExitVerifyFailed);
  EXPECT_NE(r.out.find(",fail"), std::string::npos);
}

TEST(CliVerify, OracleWithoutReturnExits3) {
  RunConfig c = load_config(kConfigs / "spin_half.yaml");
  c.options.t_max = 0.5;
  try {
    run("verify", c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(exit_code_for(e.code()), kExitNoReturn);
  }
}

TEST(CliConstrain, TwoThree) {
  const CliRun r = run_file("constrain", "constrain_23.yaml");
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("\n2,3,0,0,1,1/2,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\n1,true\n3/2,false\n4,true\n"), std::string::npos) << r.out;
}

TEST(CliConstrain, SpinHalfRecovered) {
  const CliRun r = run_file("constrain", "constrain_spin.yaml");
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("n,m,phi,phi_canonical,tau,gamma_over_2pi,gamma\n1,0,1,1,1/2,"), std::string::npos) << r.out;
}

TEST(CliConstrain, SingleLevelIsUsageError) {
  EXPECT_EQ(run_file("constrain", "constrain_single.yaml").code, kExitUsage);
}

TEST(CliConfig, Rejections) {
  EXPECT_EQ(parse_error_code("spin_half: {theta: 1}\nraw_spectrum: {levels: []}\n"), Errc::parse_error);
  EXPECT_EQ(parse_error_code("spin_half: {theta: 1}\noptions: {tolerance: -1}\n"), Errc::parse_error);
  EXPECT_EQ(parse_error_code("spin_half: {theta: 1}\noptions: {fidelity_tol: 0}\n"), Errc::parse_error);
  EXPECT_EQ(parse_error_code("spin_half: [1, 2\n"), Errc::parse_error);
  EXPECT_EQ(parse_error_code("model: two_mirror\nspin_half: {theta: 1}\n"), Errc::parse_error);
  EXPECT_EQ(parse_error_code("two_mirror: {r: 1.4142135623730951, k2: \"1/2\", field_amplitudes: [\"1\"]}\n"),
            Errc::incommensurable_input);
}

TEST(CliConfig, SpinSweepExpands) {
  const RunConfig c = parse_config("spin_half:\n  theta_over_pi: [\"1/4\", \"1/2\"]\n");
  ASSERT_EQ(c.cases.size(), 2u);
  EXPECT_TRUE(c.cases[0].closed_form.has_value());
  EXPECT_EQ(c.model, ModelKind::spin_half);
}

TEST(CliExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(Errc::non_cyclic), 2);
  EXPECT_EQ(exit_code_for(Errc::incommensurable_input), 2);
  EXPECT_EQ(exit_code_for(Errc::no_period_detected), 3);
  EXPECT_EQ(exit_code_for(Errc::parse_error), 64);
}
