#include "rbsmc/smc_design.hpp"

#include <cmath>
#include <limits>

#include "rbsmc/errors.hpp"
#include "rbsmc/linalg.hpp"
#include "rbsmc/lyapunov_lmi.hpp"

namespace rbsmc {

void DelayedSystem::validate() const {
  const std::size_t nn = a.rows();
  if (nn == 0 || a.cols() != nn) throw DimensionMismatch("a must be square");
  if (a_d.rows() != nn || a_d.cols() != nn)
    throw DimensionMismatch("a_d must match a");
  if (b.rows() != nn || b.cols() == 0)
    throw DimensionMismatch("b must be n x m with m >= 1");
  if (c.rows() != b.cols() || c.cols() != nn)
    throw DimensionMismatch("c must be m x n");
  if (d.rows() != nn || d.cols() == 0)
    throw DimensionMismatch("d must be n x p with p >= 1");
  if (tau < 1) throw DimensionMismatch("tau must be >= 1");
  if (!(delta_max >= 0.0) || !std::isfinite(delta_max))
    throw DimensionMismatch("delta_max must be finite and >= 0");
}

DeformedSystem deform(const DelayedSystem& sys, const RotaBaxterOperator& p) {
  sys.validate();
  if (p.dimension() != sys.n())
    throw DimensionMismatch("operator dimension does not match state size");

  DeformedSystem def;
  def.source = sys;
  def.a_p = apply(p, sys.a);
  def.a_dp = apply(p, sys.a_d);

  if (sys.b.rows() == sys.b.cols()) {
    def.b_p = apply(p, sys.b);
  } else if (p.kind() == RotaBaxterOperator::Kind::ScalarScaling) {
    // Scalar scaling acts entrywise, so rectangular inputs go through.
    def.b_p = (-p.weight()) * sys.b;
  } else {
    throw UnsupportedDeformation(
        "rectangular b requires a scalar-scaling operator");
  }

  def.cb_p = sys.c * def.b_p;
  Matrix cb_inv;
  try {
    cb_inv = inverse(def.cb_p);
  } catch (const SingularMatrix&) {
    throw SingularActuation("c * b_p is singular");
  }

  def.pi = Matrix::identity(sys.n()) - def.b_p * cb_inv * sys.c;
  def.a_bar = def.pi * def.a_p;
  def.a_dbar = def.pi * def.a_dp;
  def.d_bar = def.pi * sys.d;
  return def;
}

KStrongResult check_k_strong(const DeformedSystem& def, const Matrix& k) {
  KStrongResult res;
  res.norm = spectral_norm(def.a_p - def.b_p * k);
  res.ok = res.norm < 1.0;
  return res;
}

R0Result check_r0(const DeformedSystem& def, const Matrix& k, double r0,
                  double r_d0, double rho_max, double delta_max) {
  const double denom = 1.0 - spectral_norm(def.a_p - def.b_p * k);
  if (denom <= 0.0)
    throw KStrongViolated("||a_p - b_p k|| >= 1, bound unavailable");
  R0Result res;
  res.required_r0 = (spectral_norm(def.a_dp) * r_d0 +
                     rho_max * spectral_norm(def.b_p) +
                     delta_max * spectral_norm(def.source.d)) /
                    denom;
  res.ok = r0 >= res.required_r0;
  return res;
}

double alpha0(const DeformedSystem& def, const DelayedSystem& sys,
              const Matrix& k, double r0, double r_d0) {
  return spectral_norm(sys.c * (def.a_p - def.b_p * k)) * r0 +
         spectral_norm(sys.c * def.a_dp) * r_d0 +
         sys.delta_max * spectral_norm(sys.c * sys.d);
}

ReachingReport reaching_report(const DeformedSystem& def,
                               const DelayedSystem& sys, const Matrix& k,
                               double r0, double r_d0, double phi, double rho,
                               double s0_norm) {
  const double a0 = alpha0(def, sys, k, r0, r_d0);
  if (phi <= a0) throw PhiTooSmall("phi must exceed alpha0");
  const double cb_norm = spectral_norm(def.cb_p);
  if (rho * cb_norm > phi - a0)
    throw RhoTooLarge("rho * ||c b_p|| exceeds phi - alpha0");

  ReachingReport rep;
  rep.beta = rho * cb_norm / phi;
  // beta = 1 is only reachable when alpha0 = 0 and rho saturates the
  // bound; the consistent limit of alpha0 / (1 - beta) along that edge
  // is phi itself.
  rep.s_star = rep.beta < 1.0 ? a0 / (1.0 - rep.beta) : phi;

  if (s0_norm <= phi) {
    rep.t_star = 0;
  } else if (rep.beta == 0.0) {
    rep.t_star = 1;
  } else if (std::abs(phi - rep.s_star) <= 1e-12) {
    rep.t_star = 1;
  } else {
    const double steps = std::log((s0_norm - rep.s_star) / (phi - rep.s_star)) /
                         std::log(1.0 / rep.beta);
    rep.t_star = static_cast<std::size_t>(std::ceil(steps));
  }
  return rep;
}

BandCheck band_invariance_check(const DeformedSystem& def,
                                const DelayedSystem& sys, const Matrix& k,
                                double rho, double phi, double r) {
  const Matrix phi_rho = sys.c * (def.a_p - def.b_p * k) -
                         (rho / phi) * (def.cb_p * sys.c);
  BandCheck res;
  res.lhs = spectral_norm(phi_rho) * r + spectral_norm(sys.c * def.a_dp) * r +
            sys.delta_max * spectral_norm(sys.c * sys.d);
  res.ok = res.lhs <= phi;
  return res;
}

DesignState run_design(const DelayedSystem& sys, const RotaBaxterOperator& p,
                       const Matrix& k, double r0, double r_d0, double rho_max,
                       double phi, double rho,
                       const StabilityCertificate* certificate) {
  const DeformedSystem def = deform(sys, p);

  DesignState st;
  // (i) record the admissible-set bounds.
  st.r0 = r0;
  st.r_d0 = r_d0;
  st.rho_max = rho_max;
  st.k = k;
  st.phi = phi;
  st.rho = rho;
  st.step_flags[0] = true;

  // (ii) strong contraction of the gain.
  const KStrongResult ks = check_k_strong(def, k);
  st.k_norm = ks.norm;
  if (!ks.ok) return st;
  st.step_flags[1] = true;

  // (iii) admissibility of the initial-state bound.
  const R0Result rr = check_r0(def, k, r0, r_d0, rho_max, sys.delta_max);
  st.required_r0 = rr.required_r0;
  if (!rr.ok) return st;
  st.step_flags[2] = true;

  // (iv) band width dominates the drift constant.
  st.alpha0 = alpha0(def, sys, k, r0, r_d0);
  if (!(phi > st.alpha0)) return st;
  st.step_flags[3] = true;

  // (v) switching amplitude within both caps.
  const double cb_norm = spectral_norm(def.cb_p);
  const double rho_cap = std::min(rho_max, (phi - st.alpha0) / cb_norm);
  if (!(rho <= rho_cap)) return st;
  st.step_flags[4] = true;
  // Worst-case surface value over the initial ball.
  const double s0_norm = spectral_norm(sys.c) * r0;
  const ReachingReport rep =
      reaching_report(def, sys, k, r0, r_d0, phi, rho, s0_norm);
  st.beta = rep.beta;
  st.s_star = rep.s_star;
  st.t_star = rep.t_star;

  // (vi) certified band invariance, if a certificate is available.
  if (certificate == nullptr) return st;
  const double lam_min = min_symmetric_eigenvalue(certificate->x);
  const double r = std::sqrt(certificate->v0 / lam_min);
  st.certified_r = r;
  const BandCheck band = band_invariance_check(def, sys, k, rho, phi, r);
  st.band_lhs = band.lhs;
  if (!band.ok) return st;
  st.step_flags[5] = true;
  return st;
}

}  // namespace rbsmc
