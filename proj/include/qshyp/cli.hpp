#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qshyp/config.hpp"
#include "qshyp/diagnostics.hpp"
#include "qshyp/dynamics.hpp"

namespace qshyp {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitRuntime = 2, kExitValidation = 3 };

struct RunResult {
  Trajectory trajectory;
  std::vector<DiagnosticsRecord> records;
  std::optional<LoopAdvection> loop;
};

/// Initial data, integration and diagnostics for one config (no file output).
RunResult run_simulation(const RunConfig& cfg);

/// Command-line entry point; args excludes the program name.
///   run <config>, check-potential <config>, compare <cfgA> <cfgB>,
///   convergence <config>, info <checkpoint>
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qshyp
