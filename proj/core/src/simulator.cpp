#include "rbsmc/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "rbsmc/errors.hpp"
#include "rbsmc/linalg.hpp"

namespace rbsmc {

DisturbanceSpec DisturbanceSpec::zero(std::size_t p) {
  DisturbanceSpec spec;
  spec.kind = Kind::Constant;
  spec.direction = Matrix::zero(p, 1);
  return spec;
}

DisturbanceSpec DisturbanceSpec::explicit_sequence(std::vector<Matrix> seq) {
  DisturbanceSpec spec;
  spec.kind = Kind::Explicit;
  spec.sequence = std::move(seq);
  return spec;
}

DisturbanceSpec DisturbanceSpec::constant(Matrix v) {
  DisturbanceSpec spec;
  spec.kind = Kind::Constant;
  spec.direction = std::move(v);
  return spec;
}

DisturbanceSpec DisturbanceSpec::sinusoid(Matrix v, double omega,
                                          double phase) {
  DisturbanceSpec spec;
  spec.kind = Kind::Sinusoid;
  spec.direction = std::move(v);
  spec.omega = omega;
  spec.phase = phase;
  return spec;
}

DisturbanceSpec DisturbanceSpec::uniform(std::uint64_t seed) {
  DisturbanceSpec spec;
  spec.kind = Kind::Uniform;
  spec.seed = seed;
  return spec;
}

std::vector<Matrix> DisturbanceSpec::materialize(std::size_t n_steps,
                                                 std::size_t p,
                                                 double delta_max) const {
  const double bound = delta_max * (1.0 + 1e-12);
  std::vector<Matrix> out;
  out.reserve(n_steps);

  switch (kind) {
    case Kind::Explicit: {
      if (sequence.size() < n_steps)
        throw DimensionMismatch("disturbance sequence shorter than horizon");
      for (std::size_t k = 0; k < n_steps; ++k) {
        const Matrix& v = sequence[k];
        if (v.rows() != p || v.cols() != 1)
          throw DimensionMismatch("disturbance entries must be p x 1");
        if (frobenius_norm(v) > bound)
          throw DisturbanceTooLarge("explicit disturbance exceeds delta_max");
        out.push_back(v);
      }
      break;
    }
    case Kind::Constant: {
      if (direction.rows() != p || direction.cols() != 1)
        throw DimensionMismatch("disturbance direction must be p x 1");
      if (frobenius_norm(direction) > bound)
        throw DisturbanceTooLarge("constant disturbance exceeds delta_max");
      out.assign(n_steps, direction);
      break;
    }
    case Kind::Sinusoid: {
      if (direction.rows() != p || direction.cols() != 1)
        throw DimensionMismatch("disturbance direction must be p x 1");
      if (frobenius_norm(direction) > bound)
        throw DisturbanceTooLarge("sinusoid amplitude exceeds delta_max");
      for (std::size_t k = 0; k < n_steps; ++k)
        out.push_back(std::sin(omega * static_cast<double>(k) + phase) *
                      direction);
      break;
    }
    case Kind::Uniform: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      const double radius = delta_max * (1.0 - 1e-12);
      for (std::size_t k = 0; k < n_steps; ++k) {
        Matrix v = Matrix::zero(p, 1);
        double norm_sq = 2.0;
        while (norm_sq > 1.0) {
          norm_sq = 0.0;
          for (std::size_t i = 0; i < p; ++i) {
            const double u = unit(rng);
            v(i, 0) = u;
            norm_sq += u * u;
          }
        }
        out.push_back(radius * v);
      }
      break;
    }
  }
  return out;
}

Matrix saturate(const Matrix& v, double phi) {
  if (!(phi > 0.0)) throw NonpositivePhi("phi must be positive");
  Matrix out = Matrix::zero(v.rows(), v.cols());
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t j = 0; j < v.cols(); ++j) {
      const cplx vij = v(i, j);
      const double mag = std::abs(vij);
      out(i, j) = mag <= phi ? vij / phi : vij / mag;
    }
  return out;
}

namespace {

void require_history(const std::vector<Matrix>& history, std::size_t tau) {
  if (history.size() < tau + 1)
    throw HistoryTooShort("history must reach back tau steps");
}

}  // namespace

Matrix step_closed_loop(const DelayedSystem& sys, const DeformedSystem& def,
                        const Matrix& k_gain, double rho, double phi,
                        const std::vector<Matrix>& state_history,
                        const Matrix& delta_k) {
  require_history(state_history, sys.tau);
  if (frobenius_norm(delta_k) > sys.delta_max * (1.0 + 1e-12))
    throw DisturbanceTooLarge("disturbance exceeds delta_max");
  const Matrix& xk = state_history.front();
  const Matrix& xd = state_history[sys.tau];
  return (def.a_p - def.b_p * k_gain) * xk + def.a_dp * xd -
         rho * (def.b_p * saturate(sys.c * xk, phi)) + sys.d * delta_k;
}

Matrix step_reduced(const DeformedSystem& def,
                    const std::vector<Matrix>& state_history,
                    const Matrix& delta_k) {
  require_history(state_history, def.source.tau);
  const Matrix& xk = state_history.front();
  const Matrix& xd = state_history[def.source.tau];
  return def.a_bar * xk + def.a_dbar * xd + def.d_bar * delta_k;
}

namespace {

double quad_form(const Matrix& m, const Matrix& x) {
  return (x.conj_transpose() * m * x)(0, 0).real();
}

}  // namespace

Trajectory simulate(const DelayedSystem& sys, const DeformedSystem& def,
                    const DesignState& design,
                    const StabilityCertificate* cert, Trajectory::Mode mode,
                    std::size_t n_steps, const DisturbanceSpec& disturbance,
                    const std::vector<Matrix>& initial_history) {
  sys.validate();
  if (n_steps < 1) throw std::invalid_argument("horizon must be >= 1");
  const std::size_t tau = sys.tau;
  if (initial_history.size() != tau + 1)
    throw HistoryLengthMismatch("initial history must hold tau + 1 states");
  for (const Matrix& x : initial_history)
    if (x.rows() != sys.n() || x.cols() != 1)
      throw DimensionMismatch("history entries must be n x 1");

  Trajectory traj;
  traj.mode = mode;
  traj.tau = tau;
  traj.disturbances = disturbance.materialize(n_steps, sys.p(), sys.delta_max);

  // states[k + tau] = x(k); the initial history arrives newest first.
  traj.states.reserve(tau + 1 + n_steps);
  for (std::size_t i = 0; i <= tau; ++i)
    traj.states.push_back(initial_history[tau - i]);

  for (std::size_t k = 0; k < n_steps; ++k) {
    std::vector<Matrix> window;
    window.reserve(tau + 1);
    for (std::size_t i = 0; i <= tau; ++i)
      window.push_back(traj.states[k + tau - i]);
    traj.states.push_back(
        mode == Trajectory::Mode::ClosedLoop
            ? step_closed_loop(sys, def, design.k, design.rho, design.phi,
                               window, traj.disturbances[k])
            : step_reduced(def, window, traj.disturbances[k]));
  }

  for (std::size_t k = 0; k <= n_steps; ++k) {
    const Matrix& xk = traj.states[k + tau];
    traj.sliding.push_back(sys.c * xk);
    if (k < n_steps && mode == Trajectory::Mode::ClosedLoop)
      traj.controls.push_back(cplx(-1.0) * (design.k * xk) -
                              design.rho *
                                  saturate(sys.c * xk, design.phi));
    else if (k < n_steps)
      traj.controls.push_back(Matrix::zero(sys.m(), 1));
    if (cert != nullptr) {
      double v = quad_form(cert->x, xk);
      for (std::size_t i = 1; i <= tau; ++i)
        v += quad_form(cert->y, traj.states[k + tau - i]);
      traj.lyapunov.push_back(v);
    }
  }
  return traj;
}

DeltaVReport delta_v_check(const Trajectory& traj,
                           const StabilityCertificate& cert) {
  if (traj.mode != Trajectory::Mode::Reduced)
    throw ModeMismatch("dissipation bound is proved for reduced mode only");
  if (traj.lyapunov.empty())
    throw std::invalid_argument("trajectory carries no Lyapunov values");

  const std::size_t n_steps = traj.horizon();
  const std::size_t tau = traj.tau;
  DeltaVReport rep;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const Matrix& xk = traj.states[k + tau];
    const Matrix& xk1 = traj.states[k + tau + 1];
    const Matrix& xkd = traj.states[k];
    const double dv = traj.lyapunov[k + 1] - traj.lyapunov[k];

    const double identity = quad_form(cert.x, xk1) - quad_form(cert.x, xk) +
                            quad_form(cert.y, xk) - quad_form(cert.y, xkd);
    rep.telescoping_residual =
        std::max(rep.telescoping_residual, std::abs(dv - identity));

    const double xnorm = frobenius_norm(xk);
    const double dnorm = frobenius_norm(traj.disturbances[k]);
    const double viol = dv + cert.mu * xnorm * xnorm -
                        cert.gamma * cert.gamma * dnorm * dnorm;
    if (k == 0 || viol > rep.max_violation) rep.max_violation = viol;
  }
  return rep;
}

namespace {

void append_num(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  out += buf;
}

}  // namespace

std::string to_csv(const Trajectory& traj) {
  const std::size_t n_steps = traj.horizon();
  const std::size_t tau = traj.tau;
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().rows();
  const std::size_t m = traj.sliding.empty() ? 0 : traj.sliding.front().rows();
  const std::size_t p =
      traj.disturbances.empty() ? 0 : traj.disturbances.front().rows();

  std::string out = "k";
  for (std::size_t i = 1; i <= n; ++i) out += ",x_" + std::to_string(i);
  for (std::size_t i = 1; i <= m; ++i) out += ",s_" + std::to_string(i);
  for (std::size_t i = 1; i <= m; ++i) out += ",u_" + std::to_string(i);
  for (std::size_t i = 1; i <= p; ++i) out += ",delta_" + std::to_string(i);
  out += ",V,norm_s\n";

  for (std::size_t k = 0; k <= n_steps; ++k) {
    out += std::to_string(k);
    const Matrix& xk = traj.states[k + tau];
    for (std::size_t i = 0; i < n; ++i) {
      out += ',';
      append_num(out, xk(i, 0).real());
    }
    const Matrix& sk = traj.sliding[k];
    for (std::size_t i = 0; i < m; ++i) {
      out += ',';
      append_num(out, sk(i, 0).real());
    }
    for (std::size_t i = 0; i < m; ++i) {
      out += ',';
      append_num(out, k < n_steps ? traj.controls[k](i, 0).real() : 0.0);
    }
    for (std::size_t i = 0; i < p; ++i) {
      out += ',';
      append_num(out, k < n_steps ? traj.disturbances[k](i, 0).real() : 0.0);
    }
    out += ',';
    append_num(out, traj.lyapunov.empty() ? 0.0 : traj.lyapunov[k]);
    out += ',';
    append_num(out, frobenius_norm(sk));
    out += '\n';
  }
  return out;
}

}  // namespace rbsmc
