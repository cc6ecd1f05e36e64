#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rbsmc/matrix.hpp"
#include "rbsmc/smc_design.hpp"

namespace rbsmc {

/// Data of the delay-dependent stability inequality for the reduced
/// dynamics x(k+1) = a_bar x(k) + a_dbar x(k-tau) + d_bar delta(k).
struct LmiProblem {
  Matrix a_bar;
  Matrix a_dbar;
  Matrix d_bar;
  double epsilon_margin = 1e-6;

  static LmiProblem from_deformed(const DeformedSystem& def,
                                  double epsilon_margin = 1e-6);

  std::size_t n() const { return a_bar.rows(); }
  std::size_t p() const { return d_bar.cols(); }
  /// Block sizes (n, n, p, n) of the linear form; they sum to 3n + p.
  std::array<std::size_t, 4> block_layout() const {
    return {n(), n(), p(), n()};
  }
  void validate() const;
};

/// Everything needed to re-check stability a posteriori. x = q^{-1},
/// y = x y_tilde x, m_full is the quadratic form on (x(k), x(k-tau),
/// delta(k)); mu = lambda_min(-m_full), mu0 the same for the leading
/// delay-only 2n block.
struct StabilityCertificate {
  Matrix q;
  Matrix y_tilde;
  double gamma = 0.0;
  Matrix x;
  Matrix y;
  Matrix m_full;
  double mu = 0.0;
  double mu0 = 0.0;
  double effective_gain = 0.0;
  double v0 = 0.0;
  double r = 0.0;
  double lmi_max_eig = 0.0;
};

/// [-q + y_tilde, 0, 0, q a_bar^T; 0, -y_tilde, 0, q a_dbar^T;
///  0, 0, -gamma_sq I_p, d_bar^T; a_bar q, a_dbar q, d_bar, -q],
/// Hermitian-symmetrized. Size 3n + p.
Matrix assemble_linear_lmi(const LmiProblem& prob, const Matrix& q,
                           const Matrix& y_tilde, double gamma_sq);

/// F^T x F + diag(-x + y, -y, -gamma^2 I_p) with F = [a_bar a_dbar d_bar].
/// Size 2n + p.
Matrix assemble_bmi(const LmiProblem& prob, const Matrix& x, const Matrix& y,
                    double gamma);

/// Schur-complement form of size 3n + p with trailing block -x^{-1}.
Matrix assemble_schur(const LmiProblem& prob, const Matrix& x, const Matrix& y,
                      double gamma);

/// Interior-point feasibility: minimizes the maximum eigenvalue t of the
/// assembled linear form over (q, y_tilde) by damped Newton steps on the
/// log-det barrier of t I - F(x), with barriers keeping q, y_tilde above
/// epsilon_margin. Succeeds once t < -epsilon_margin.
///
/// Throws Infeasible when no such point is found within 500 Newton
/// iterations, NumericalFailure when the barrier Hessian degenerates.
std::optional<std::pair<Matrix, Matrix>> solve_feasibility(
    const LmiProblem& prob, double gamma_sq);

/// Bisects gamma^2 on [0, gamma_hi^2] down to a width of 1e-3 relative to
/// the initial interval and returns the certificate at the smallest
/// feasible gamma found. v0 and r are left at zero; fill them with
/// v0_and_r once the initial history is known.
StabilityCertificate minimize_gamma(const LmiProblem& prob, double gamma_hi);

/// v0 = x(0)^T X x(0) + sum_{i=1..tau} x(-i)^T Y x(-i) over the history
/// [x(0), x(-1), ..., x(-tau)]; r = sqrt(v0 / lambda_min(X)).
std::pair<double, double> v0_and_r(const StabilityCertificate& cert,
                                   const std::vector<Matrix>& x_history,
                                   std::size_t tau);

struct SufficiencyResult {
  double sigma_max_f = 0.0;
  bool ok = false;
};

/// sigma_max([a_bar a_dbar d_bar])^2 < min(1 - epsilon, epsilon, gamma^2).
/// Sufficient for feasibility, never necessary.
SufficiencyResult feasibility_sufficient(const LmiProblem& prob,
                                         double epsilon, double gamma);

}  // namespace rbsmc
