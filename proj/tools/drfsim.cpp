// drfsim: command-line front end for the reference-frame degradation models.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "drfsim/harness.hpp"
#include "drfsim/selftest.hpp"

namespace {

int selftest(std::uint64_t seed) {
  const drfsim::SelftestReport report = drfsim::run_selftest(seed);
  for (const std::string& failure : report.failures) std::cout << "FAIL " << failure << '\n';
  std::cout << "selftest: " << report.passed << " passed, " << report.failed << " failed\n";
  return report.ok() ? 0 : 1;
}

std::string describe(drfsim::Command command) {
  switch (command) {
    case drfsim::Command::QuantumEvolve: return "Iterate the frame map and compare with the closed-form fidelity";
    case drfsim::Command::ClassicalWalk: return "Legendre-spectrum random walk fidelity";
    case drfsim::Command::Compare: return "Quantum map, closed form and classical walk side by side";
    case drfsim::Command::Trajectories: return "Monte Carlo measurement records versus the averaged map";
    case drfsim::Command::CoherentTest: return "NNLS test for mixtures of coherent states";
    case drfsim::Command::Scaling: return "Half-lives and their ratios under doubling of 2j";
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum directional reference frame degradation and its random-walk model"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string(drfsim::library_version()));

  drfsim::RunConfig config;
  std::string twice_j;
  bool run_selftest = false;
  app.add_flag("--selftest", run_selftest, "Run the structural invariant suite and exit");
  app.add_option("--seed", config.seed, "Master RNG seed");

  for (drfsim::Command command : drfsim::all_commands()) {
    CLI::App* sub = app.add_subcommand(std::string(drfsim::command_name(command)), describe(command));
    sub->add_option("--twice-j", twice_j, "2j as an integer, a list '1,2,3' or a range '1:20'");
    sub->add_option("--n-max", config.n_max, "Last step (default: ceil(5 half-life))");
    sub->add_option("--alpha", config.alpha, "Walk step in radians (default: fitted step)");
    sub->add_option("--seed", config.seed, "Master RNG seed");
    sub->add_option("--samples", config.samples, "Trajectories per spin");
    sub->add_option("--l-max", config.l_max, "Legendre truncation order");
    sub->add_option("--nodes", config.n_nodes, "Coherent-state grid nodes");
    sub->add_option("--out", config.out, "CSV output path (stdout when omitted)");
    sub->add_flag("--selftest", run_selftest, "Run the structural invariant suite and exit");
    sub->callback([&config, command] { config.command = command; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run_selftest) return selftest(config.seed);
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }

  try {
    config.twice_j = drfsim::parse_twice_j_list(twice_j);
  } catch (const drfsim::UsageError& e) {
    std::cerr << "drfsim: " << e.what() << '\n';
    return 2;
  }
  return drfsim::run(config, std::cout, std::cerr);
}
