#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "run_config.hpp"

namespace ringqpe::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitIo = 2,
  kExitCostGuard = 3,
  kExitTolerance = 4,
};

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json summary;
};

// Each command writes its files into config.out_dir and returns the summary
// that is printed as one JSON line. Errors propagate as exceptions.
[[nodiscard]] CommandResult cmd_evolve(const RunConfig& config);
[[nodiscard]] CommandResult cmd_qpe(const RunConfig& config);
[[nodiscard]] CommandResult cmd_nonabelian(const RunConfig& config);
// sub is one of check-poisson, propagator, classical-scan.
[[nodiscard]] CommandResult cmd_pathint(const RunConfig& config, const std::string& sub);

// Validates, runs `command` ("evolve", "qpe", "nonabelian", "pathint <sub>"),
// prints the summary line to `out`, maps exceptions to exit codes with a
// message on `err`.
int run_command(const std::string& command, const RunConfig& config, std::ostream& out,
                std::ostream& err);

}  // namespace ringqpe::cli
