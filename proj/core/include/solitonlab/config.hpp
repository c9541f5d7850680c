#pragma once

// Line-oriented run configuration:
//
//   # comment
//   command = compare
//   schedule = 0, 8, 20
//   x_min = -90
//   [soliton]
//   x0 = -16
//   p = 1
//
// Top-level keys must precede the first [soliton] block; each block adds one
// soliton. Unknown keys are rejected with the offending line number.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solitonlab/scenarios.hpp"

namespace solitonlab {

enum class Command { ground_state, evolve_var, evolve_grid, compare, hamiltonian_scan };

std::string_view command_name(Command command);
/// Throws UsageError for an unknown name.
Command parse_command(std::string_view name);

struct HamiltonianScan {
  double q_min = 1.0;
  double q_max = 15.0;
  int points = 141;
};

struct RunConfig {
  std::optional<Command> command;
  int n_gaussians = 1;
  std::optional<std::vector<double>> seed_widths;
  Scenario scenario;
  HamiltonianScan scan;
  // Every k-th lattice site is written to snapshots.csv.
  int snapshot_stride = 1;
};

/// Parses and validates a configuration. Throws ConfigError carrying the
/// line number for syntax errors and unknown keys, and naming the key for
/// out-of-range values.
RunConfig parse_config(std::string_view text);

/// Applies one `key=value` assignment to the top-level settings, then
/// revalidates. Throws ConfigError.
void apply_override(RunConfig& config, std::string_view assignment);

/// Checks cross-field constraints (ranges, ordering, command requirements).
void validate(const RunConfig& config);

}  // namespace solitonlab
