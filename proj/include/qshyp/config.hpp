#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qshyp/dynamics.hpp"
#include "qshyp/potential.hpp"
#include "qshyp/spectral.hpp"

namespace qshyp {

struct InitialDataSpec {
  /// taylor_green | random_bandlimited | manufactured | checkpoint
  std::string kind = "taylor_green";
  double amp_v = 0.1;
  double amp_q = 0.05;
  double amp_p = 0.05;
  /// Largest |k_axis| of the random fields (Q gets the steepest decay).
  int band = 3;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string checkpoint;
};

struct AuditSpec {
  double radius = 1.0;
  std::size_t samples = 20000;
  std::uint64_t seed = 12345;
};

struct LoopSpec {
  bool enabled = false;
  Point3 center{kPi / 2.0, kPi / 2.0, 0.0};
  double radius = 0.5;
  std::size_t markers = 128;
  int normal_axis = 2;
};

struct RunConfig {
  int n = 32;
  int dims = 2;
  IntegrationSettings time{1.0, 0.1, 0.5, 0.0};
  PotentialParams potential;
  bool lambda_auto = false;
  AuditSpec audit;
  InitialDataSpec initial;
  bool dealias_potential = false;
  double blowup_cap = 1e6;
  LoopSpec loop;
  std::string diagnostics_path = "diagnostics.csv";
  std::string checkpoint_path;  ///< final-state checkpoint; empty disables it
  std::optional<double> gronwall_c;
  int weak_cutoff = 2;

  Grid grid() const { return Grid(n, dims); }
  DynamicsOptions dynamics_options() const;
};

/// Parses flat "key = value" text ('#' starts a comment). Every problem
/// (syntax, unknown key, bad value, failed validation) is collected and
/// reported together in a ConfigError.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config_file(const std::string& path);

/// Applies "key=value" overrides on top of a parsed config and re-validates.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments);

/// Throws ConfigError listing every violated constraint.
void validate_config(const RunConfig& cfg);

/// Effective configuration, one "key = value" line per key, in a fixed order.
std::string echo_config(const RunConfig& cfg);

/// Shortest round-trip decimal for a double ("%.17g"; nan and inf spelled out).
std::string format_double(double x);

}  // namespace qshyp
