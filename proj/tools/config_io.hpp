#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbsmc/rota_baxter.hpp"
#include "rbsmc/simulator.hpp"
#include "rbsmc/smc_design.hpp"

namespace rbsmc::cli {

struct DesignConfig {
  double r0 = 0.0;
  double r_d0 = 0.0;
  double rho_max = 0.0;
  Matrix k;
  double phi = 0.0;
  double rho = 0.0;
};

struct LmiConfig {
  double gamma_hi = 1.0;
  double epsilon_margin = 1e-6;
};

struct SimConfig {
  std::size_t horizon = 0;
  Trajectory::Mode mode = Trajectory::Mode::ClosedLoop;
  std::vector<Matrix> initial_history;  // x(0), x(-1), ..., x(-tau)
  DisturbanceSpec disturbance;
};

/// One JSON document per run: system + operator always, the remaining
/// sections only when the corresponding subcommand needs them.
struct RunConfig {
  DelayedSystem system;
  std::optional<RotaBaxterOperator> op;
  std::optional<DesignConfig> design;
  std::optional<LmiConfig> lmi;
  std::optional<SimConfig> sim;
  std::string output_dir = "out";

  const RotaBaxterOperator& require_op() const;
};

/// Parse / serialize. Loading throws ConfigError with the offending
/// field's dotted path in the message.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::string& path);

/// Exact structural equality, used by the round-trip test.
bool config_equal(const RunConfig& a, const RunConfig& b);

/// Matrices serialize as row-major nested arrays; entries are plain
/// numbers when real, {"re": .., "im": ..} otherwise.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace rbsmc::cli
