#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cli_config.hpp"

namespace cli {

/// Builds the geometry and the 16-scenario suite, saves both under the
/// output directory, and echoes the effective configuration.
int cmd_simulate(const run_config& config);

/// Runs one method on one saved scenario; writes the estimate, a JSON trace,
/// and (for moeaar methods) the per-cycle telemetry. `seed` overrides the
/// derived seed, enabling exact replay of a benchmark row.
int cmd_solve(const run_config& config, const std::string& scenario_label,
              const std::string& method, std::optional<std::uint64_t> seed);

/// Full cross of methods x scenarios x repeats; writes results.csv,
/// results.json and the three score charts.
int cmd_bench(const run_config& config);

/// Aggregates results.csv into per-method markdown + JSON summaries.
int cmd_report(const run_config& config);

} // namespace cli
