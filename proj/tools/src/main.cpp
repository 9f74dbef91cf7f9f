#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"

namespace {

struct Override {
  const char* flag;
  const char* section;
  const char* key;
  const char* help;
};

// Command-line overrides are applied after the config file, in this order.
const std::vector<Override> kOverrides = {
    {"--flux", "physics", "flux", "enclosed flux Phi"},
    {"--hbar", "physics", "hbar", "Planck constant"},
    {"--mass", "physics", "mass", "particle mass"},
    {"--radius", "physics", "radius", "ring radius"},
    {"--charge", "physics", "charge", "particle charge"},
    {"--cutoff", "numerics", "cutoff", "angular-momentum cutoff l"},
    {"--grid", "numerics", "grid", "angle grid size G"},
    {"--t-qubits", "numerics", "t_qubits", "register size for the comparison"},
    {"--samples", "numerics", "samples", "number of simulated measurements"},
    {"--times", "numerics", "times", "evolve times in units of t_R (comma list)"},
    {"--steps", "numerics", "steps", "time slices N"},
    {"--winding-cutoff", "numerics", "winding_cutoff", "winding sum cutoff"},
    {"--regulator", "numerics", "regulator", "eta / dt"},
    {"--dt", "numerics", "dt", "time step for check-poisson"},
    {"--dphi", "numerics", "dphi", "angle difference for check-poisson"},
    {"--hbar-values", "numerics", "hbar_values", "descending hbar list for classical-scan"},
    {"--scan-steps", "numerics", "scan_steps", "N list for classical-scan"},
    {"--epsilon", "numerics", "epsilon", "tent scale for classical-scan"},
};

}  // namespace

int main(int argc, char** argv) {
  using ringqpe::cli::ConfigError;

  CLI::App app{"ringqpe: phase estimation on a ring with a flux tube"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string formats;
  std::string seed;
  app.add_option("-c,--config", config_path, "run configuration file");
  app.add_option("-o,--out", out_dir, "output directory");
  app.add_option("-f,--format", formats, "comma list of csv, json, svg");
  app.add_option("--seed", seed, "sampling seed");

  std::map<std::string, std::string> values;
  for (const auto& o : kOverrides) {
    app.add_option(o.flag, values[o.flag], o.help)->group("Overrides");
  }

  app.add_subcommand("evolve", "evolve the localized state and tabulate psi");
  app.add_subcommand("qpe", "ring phase estimation at t_R");
  app.add_subcommand("nonabelian", "per-channel phase estimation for a U(N) holonomy");
  auto* pathint = app.add_subcommand("pathint", "path-integral checks");
  pathint->require_subcommand(1);
  pathint->add_subcommand("check-poisson", "one-step Poisson identity and winding dominance");
  pathint->add_subcommand("propagator", "configuration and phase-space propagators at t_R");
  pathint->add_subcommand("classical-scan", "tent-family scan over hbar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ringqpe::cli::kExitConfig;
  }

  ringqpe::cli::RunConfig config;
  try {
    if (!config_path.empty()) ringqpe::cli::apply_config_file(config, config_path);
    for (const auto& o : kOverrides) {
      if (app.count(o.flag) > 0) ringqpe::cli::set_field(config, o.section, o.key, values[o.flag]);
    }
    if (!out_dir.empty()) ringqpe::cli::set_field(config, "output", "dir", out_dir);
    if (!formats.empty()) ringqpe::cli::set_field(config, "output", "formats", formats);
    if (!seed.empty()) ringqpe::cli::set_field(config, "numerics", "seed", seed);
  } catch (const ConfigError& e) {
    std::cerr << "ringqpe: config error: " << e.what() << '\n';
    return ringqpe::cli::kExitConfig;
  }

  std::string command = app.get_subcommands().front()->get_name();
  if (command == "pathint") command += " " + pathint->get_subcommands().front()->get_name();
  return ringqpe::cli::run_command(command, config, std::cout, std::cerr);
}
