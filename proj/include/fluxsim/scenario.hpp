#pragma once

#include <cstdint>
#include <string>

#include "fluxsim/fields.hpp"
#include "fluxsim/shield.hpp"
#include "fluxsim/squid.hpp"

// Scenario configuration: one INI-style text document describing the whole
// physical setup. Every key has a default; unknown sections or keys are
// rejected by name; physical constraints are enforced at load time.

namespace fluxsim {

struct OutputConfig {
  std::string path = "-";       // "-" = stdout
  int grid_points = 41;         // field-scan points per line
  double grid_halfwidth = 2.5e-3; // m, scan extent around the solenoid center
  int screen_points = 201;
  double screen_halfwidth = 2e-4; // m
  double fringe_gradient = 1e5;   // rad/m
  int pulse_samples = 1024;
  int trajectory_points = 201;
};

struct ScenarioConfig {
  SolenoidSpec solenoid;
  ChargeState charge;
  ShieldSpec shield;
  double shield_temperature = 4.2; // K, operating temperature
  SquidSpec squid;
  Protocol protocol;
  double quad_tol = 1e-3;
  int quad_max_depth = 30;
  OutputConfig output;

  // Canonical serialization (sorted section.key=value lines, %.17g reals)
  // and its FNV-1a 64-bit hash, stamped into every CSV for provenance.
  std::string canonical_text() const;
  std::uint64_t config_hash() const;
};

ScenarioConfig default_config();

// Parses and validates. Throws ConfigError with line/column for syntax
// errors and with section.key plus the violated constraint for semantic
// ones.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

} // namespace fluxsim
