#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rbsmc/lyapunov_lmi.hpp"
#include "rbsmc/matrix.hpp"
#include "rbsmc/smc_design.hpp"

namespace rbsmc {

/// Bounded disturbance input: an explicit sequence or one of three
/// generators, all confined to the delta_max ball.
struct DisturbanceSpec {
  enum class Kind { Explicit, Constant, Sinusoid, Uniform };

  Kind kind = Kind::Constant;
  std::vector<Matrix> sequence;  // Explicit: delta(0..N-1), p x 1 each
  Matrix direction;              // Constant / Sinusoid: p x 1, norm <= delta_max
  double omega = 0.0;            // Sinusoid: delta(k) = direction * sin(omega k + phase)
  double phase = 0.0;
  std::uint64_t seed = 0;        // Uniform: seeded draw from the delta_max ball

  static DisturbanceSpec zero(std::size_t p);
  static DisturbanceSpec explicit_sequence(std::vector<Matrix> seq);
  static DisturbanceSpec constant(Matrix v);
  static DisturbanceSpec sinusoid(Matrix v, double omega, double phase = 0.0);
  static DisturbanceSpec uniform(std::uint64_t seed);

  /// Generates delta(0), ..., delta(N-1) and validates the norm bound.
  std::vector<Matrix> materialize(std::size_t n_steps, std::size_t p,
                                  double delta_max) const;
};

struct Trajectory {
  enum class Mode { ClosedLoop, Reduced };

  Mode mode = Mode::ClosedLoop;
  std::size_t tau = 1;
  std::vector<Matrix> states;        // x(-tau), ..., x(N)
  std::vector<Matrix> sliding;       // s(k) = C x(k), k = 0..N
  std::vector<Matrix> controls;      // u(k), k = 0..N-1 (zero in reduced mode)
  std::vector<Matrix> disturbances;  // delta(k), k = 0..N-1
  std::vector<double> lyapunov;      // V_k, k = 0..N; empty without certificate

  std::size_t horizon() const { return sliding.empty() ? 0 : sliding.size() - 1; }
};

struct DeltaVReport {
  double max_violation = 0.0;
  double telescoping_residual = 0.0;
};

/// Componentwise sat(v_i / phi): v_i / phi when |v_i| <= phi, else the
/// unit-modulus sign of v_i.
Matrix saturate(const Matrix& v, double phi);

/// x(k+1) = (a_p - b_p k) x(k) + a_dp x(k - tau) - rho b_p sat(c x(k)/phi)
///          + d delta(k). History is ordered [x(k), x(k-1), ..., x(k-tau)].
Matrix step_closed_loop(const DelayedSystem& sys, const DeformedSystem& def,
                        const Matrix& k_gain, double rho, double phi,
                        const std::vector<Matrix>& state_history,
                        const Matrix& delta_k);

/// x(k+1) = a_bar x(k) + a_dbar x(k - tau) + d_bar delta(k).
Matrix step_reduced(const DeformedSystem& def,
                    const std::vector<Matrix>& state_history,
                    const Matrix& delta_k);

/// Rolls the selected dynamics for n_steps steps from the initial history
/// [x(0), x(-1), ..., x(-tau)]. With a certificate, fills V_k =
/// x(k)^T X x(k) + sum_{i=1..tau} x(k-i)^T Y x(k-i).
Trajectory simulate(const DelayedSystem& sys, const DeformedSystem& def,
                    const DesignState& design,
                    const StabilityCertificate* cert, Trajectory::Mode mode,
                    std::size_t n_steps, const DisturbanceSpec& disturbance,
                    const std::vector<Matrix>& initial_history);

/// Checks the one-step Lyapunov dissipation along a reduced trajectory:
/// max_violation = max_k (Delta V_k + mu ||x(k)||^2 - gamma^2 ||delta(k)||^2),
/// telescoping_residual = max_k |Delta V_k - quadratic-form identity|.
/// Closed-loop trajectories are refused: the bound is only proved for the
/// reduced dynamics.
DeltaVReport delta_v_check(const Trajectory& traj,
                           const StabilityCertificate& cert);

/// CSV with header k, x_1..x_n, s_1..s_m, u_1..u_m, delta_1..delta_p, V,
/// norm_s; one row per k = 0..N; 15 significant digits; real parts.
std::string to_csv(const Trajectory& traj);

}  // namespace rbsmc
