#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aaphase/error.hpp"
#include "aaphase_cli/commands.hpp"
#include "aaphase_cli/config.hpp"

namespace {

struct Arguments {
  std::string config;
  std::string out;
  std::optional<int> n_range;
  std::optional<double> fidelity_tol;
  std::optional<double> t_max;
};

void add_common(CLI::App* sub, Arguments& args) {
  sub->add_option("--config", args.config, "YAML run configuration")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", args.out, "output file ('-' for stdout)")->required();
  sub->add_option("--n-range", args.n_range, "branch-integer bound for candidate enumeration")
      ->check(CLI::PositiveNumber);
  sub->add_option("--fidelity-tol", args.fidelity_tol, "oracle return threshold on 1 - fidelity")
      ->check(CLI::PositiveNumber);
  sub->add_option("--t-max", args.t_max, "oracle evolution horizon")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace aaphase::cli;
  CLI::App app{"Aharonov-Anandan phases from exact spectra, cross-checked by dense evolution"};
  app.require_subcommand(1);
  Arguments args;
  for (const char* name : {"analyze", "verify", "constrain"}) {
    const char* help = std::string_view(name) == "analyze"  ? "period, total phase and geometric phase of a model"
                       : std::string_view(name) == "verify" ? "compare the exact route with the dense-evolution oracle"
                                                            : "candidate periods and phases from a partial spectrum";
    add_common(app.add_subcommand(name, help), args);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::ostringstream body;
  int code = kExitOk;
  try {
    RunConfig config = load_config(args.config);
    if (args.n_range) config.options.n_range = *args.n_range;
    if (args.fidelity_tol) config.options.fidelity_tol = *args.fidelity_tol;
    if (args.t_max) config.options.t_max = *args.t_max;
    code = run_command(command, config, body, std::cerr);
  } catch (const aaphase::Error& e) {
    std::cerr << "aaphase " << command << ": " << aaphase::to_string(e.code()) << ": " << e.what() << '\n';
    code = exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "aaphase " << command << ": " << e.what() << '\n';
    code = kExitUsage;
  }

  if (args.out == "-") {
    std::cout << body.str();
  } else if (!body.str().empty() || code == kExitOk) {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) {
      std::cerr << "aaphase: cannot write '" << args.out << "'\n";
      return kExitUsage;
    }
    out << body.str();
  }
  return code;
}
