#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "config_io.hpp"

namespace rbsmc::cli {

struct CliOptions {
  std::string out_override;              // empty keeps config output_dir
  std::optional<std::uint64_t> seed;     // overrides sampling / generator seeds
  double tolerance_scale = 1.0;          // multiplies residual tolerances
};

/// Each command writes its JSON (and CSV) artifacts into the output
/// directory, prints a one-screen summary, and returns the process exit
/// code: 0 success, 1 property violation, 2 infeasible, 3 config error.
/// Infeasible and ConfigError escape as exceptions for main to map.
int cmd_verify_rb(const RunConfig& cfg, const CliOptions& opts);
int cmd_design(const RunConfig& cfg, const CliOptions& opts);
int cmd_certify(const RunConfig& cfg, const CliOptions& opts);
int cmd_spectral(const RunConfig& cfg, const CliOptions& opts);
int cmd_simulate(const RunConfig& cfg, const CliOptions& opts);

}  // namespace rbsmc::cli
