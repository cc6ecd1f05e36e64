#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "rbsmc/matrix.hpp"
#include "rbsmc/rota_baxter.hpp"

namespace rbsmc {

struct StabilityCertificate;

/// Discrete-time linear system with one state delay:
///   x(k+1) = a x(k) + a_d x(k - tau) + b u(k) + d delta(k),
///   s(k)   = c x(k),   ||delta(k)|| <= delta_max.
struct DelayedSystem {
  Matrix a;    // n x n
  Matrix a_d;  // n x n
  Matrix b;    // n x m
  Matrix c;    // m x n
  Matrix d;    // n x p
  std::size_t tau = 1;
  double delta_max = 0.0;

  std::size_t n() const { return a.rows(); }
  std::size_t m() const { return b.cols(); }
  std::size_t p() const { return d.cols(); }

  /// Throws DimensionMismatch on inconsistent shapes or invalid tau /
  /// delta_max.
  void validate() const;
};

/// Operator-deformed system data plus the sliding projection and the
/// equivalent-control reduced dynamics. Keeps a copy of the source system
/// because several checks need the undeformed c, d and delta_max.
struct DeformedSystem {
  DelayedSystem source;
  Matrix a_p;
  Matrix a_dp;
  Matrix b_p;
  Matrix cb_p;
  Matrix pi;
  Matrix a_bar;
  Matrix a_dbar;
  Matrix d_bar;
};

/// Outcome of the six-step design procedure. step_flags are cumulative:
/// flag j can only be set when flags 0..j-1 are.
struct DesignState {
  double r0 = 0.0;
  double r_d0 = 0.0;
  double rho_max = 0.0;
  Matrix k;
  double phi = 0.0;
  double rho = 0.0;
  double alpha0 = 0.0;
  double beta = 0.0;
  double s_star = 0.0;
  std::size_t t_star = 0;
  std::array<bool, 6> step_flags{};

  // Extra report values for serialization.
  std::optional<double> k_norm;
  std::optional<double> required_r0;
  std::optional<double> band_lhs;
  std::optional<double> certified_r;
};

struct KStrongResult {
  double norm = 0.0;
  bool ok = false;
};

struct R0Result {
  double required_r0 = 0.0;
  bool ok = false;
};

struct ReachingReport {
  double beta = 0.0;
  double s_star = 0.0;
  std::size_t t_star = 0;
};

struct BandCheck {
  double lhs = 0.0;
  bool ok = false;
};

/// Deforms (a, a_d, b) through the operator and builds the projection
/// pi = I - b_p (c b_p)^{-1} c and the reduced dynamics.
///
/// Rectangular b (m < n) is only admitted under scalar scaling, where the
/// deformation acts entrywise; anything else throws UnsupportedDeformation.
/// A singular c*b_p throws SingularActuation.
DeformedSystem deform(const DelayedSystem& sys, const RotaBaxterOperator& p);

KStrongResult check_k_strong(const DeformedSystem& def, const Matrix& k);

/// Smallest admissible initial-state bound; throws KStrongViolated when the
/// contraction denominator 1 - ||a_p - b_p k|| is not positive.
R0Result check_r0(const DeformedSystem& def, const Matrix& k, double r0,
                  double r_d0, double rho_max, double delta_max);

double alpha0(const DeformedSystem& def, const DelayedSystem& sys,
              const Matrix& k, double r0, double r_d0);

/// Reaching-phase constants and the worst-case band-entry step count.
/// Throws PhiTooSmall when phi <= alpha0, RhoTooLarge when
/// rho*||c b_p|| > phi - alpha0.
ReachingReport reaching_report(const DeformedSystem& def,
                               const DelayedSystem& sys, const Matrix& k,
                               double r0, double r_d0, double phi, double rho,
                               double s0_norm);

BandCheck band_invariance_check(const DeformedSystem& def,
                                const DelayedSystem& sys, const Matrix& k,
                                double rho, double phi, double r);

/// Runs the strictly sequential design steps (i)..(vi), stopping at the
/// first failure. Step (vi) needs a certificate whose v0 has been filled
/// from the intended initial history; without one the flag stays false.
DesignState run_design(const DelayedSystem& sys, const RotaBaxterOperator& p,
                       const Matrix& k, double r0, double r_d0, double rho_max,
                       double phi, double rho,
                       const StabilityCertificate* certificate = nullptr);

}  // namespace rbsmc
