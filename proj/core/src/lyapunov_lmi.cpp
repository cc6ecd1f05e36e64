#include "rbsmc/lyapunov_lmi.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rbsmc/errors.hpp"
#include "rbsmc/linalg.hpp"

namespace rbsmc {

namespace {

// log det of a Hermitian positive definite matrix via Cholesky; nullopt
// when the matrix is not (numerically) positive definite.
std::optional<double> chol_logdet(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix l = Matrix::zero(n, n);
  double logdet = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cplx diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * std::conj(l(j, k));
    if (!(diag.real() > 0.0) || !std::isfinite(diag.real()))
      return std::nullopt;
    const double ljj = std::sqrt(diag.real());
    l(j, j) = ljj;
    logdet += 2.0 * std::log(ljj);
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx sum = a(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * std::conj(l(j, k));
      l(i, j) = sum / ljj;
    }
  }
  return logdet;
}

double re_trace(const Matrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i).real();
  return t;
}

// Re tr(a b) without forming the product.
double re_trace_prod(const Matrix& a, const Matrix& b) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      t += (a(i, j) * b(j, i)).real();
  return t;
}

Matrix hermitize(const Matrix& m) {
  return 0.5 * (m + m.conj_transpose());
}

}  // namespace

LmiProblem LmiProblem::from_deformed(const DeformedSystem& def,
                                     double epsilon_margin) {
  LmiProblem prob;
  prob.a_bar = def.a_bar;
  prob.a_dbar = def.a_dbar;
  prob.d_bar = def.d_bar;
  prob.epsilon_margin = epsilon_margin;
  return prob;
}

void LmiProblem::validate() const {
  const std::size_t nn = a_bar.rows();
  if (nn == 0 || a_bar.cols() != nn)
    throw DimensionMismatch("a_bar must be square");
  if (a_dbar.rows() != nn || a_dbar.cols() != nn)
    throw DimensionMismatch("a_dbar must match a_bar");
  if (d_bar.rows() != nn || d_bar.cols() == 0)
    throw DimensionMismatch("d_bar must be n x p with p >= 1");
  if (!(epsilon_margin > 0.0) || !std::isfinite(epsilon_margin))
    throw std::invalid_argument("epsilon_margin must be positive");
}

Matrix assemble_linear_lmi(const LmiProblem& prob, const Matrix& q,
                           const Matrix& y_tilde, double gamma_sq) {
  prob.validate();
  const std::size_t n = prob.n();
  const std::size_t p = prob.p();
  if (q.rows() != n || q.cols() != n)
    throw DimensionMismatch("q must be n x n");
  if (y_tilde.rows() != n || y_tilde.cols() != n)
    throw DimensionMismatch("y_tilde must be n x n");

  Matrix m = Matrix::zero(3 * n + p, 3 * n + p);
  m.set_block(0, 0, y_tilde - q);
  m.set_block(0, 2 * n + p, q * prob.a_bar.conj_transpose());
  m.set_block(n, n, -y_tilde);
  m.set_block(n, 2 * n + p, q * prob.a_dbar.conj_transpose());
  m.set_block(2 * n, 2 * n, (-gamma_sq) * Matrix::identity(p));
  m.set_block(2 * n, 2 * n + p, prob.d_bar.conj_transpose());
  m.set_block(2 * n + p, 0, prob.a_bar * q);
  m.set_block(2 * n + p, n, prob.a_dbar * q);
  m.set_block(2 * n + p, 2 * n, prob.d_bar);
  m.set_block(2 * n + p, 2 * n + p, -q);
  return hermitize(m);
}

Matrix assemble_bmi(const LmiProblem& prob, const Matrix& x, const Matrix& y,
                    double gamma) {
  prob.validate();
  const std::size_t n = prob.n();
  const std::size_t p = prob.p();
  if (x.rows() != n || x.cols() != n) throw DimensionMismatch("x must be n x n");
  if (y.rows() != n || y.cols() != n) throw DimensionMismatch("y must be n x n");

  const Matrix f = hstack({prob.a_bar, prob.a_dbar, prob.d_bar});
  Matrix m = f.conj_transpose() * x * f;
  m.set_block(0, 0, m.block(0, 0, n, n) - x + y);
  m.set_block(n, n, m.block(n, n, n, n) - y);
  m.set_block(2 * n, 2 * n,
              m.block(2 * n, 2 * n, p, p) - (gamma * gamma) * Matrix::identity(p));
  return hermitize(m);
}

Matrix assemble_schur(const LmiProblem& prob, const Matrix& x, const Matrix& y,
                      double gamma) {
  prob.validate();
  const std::size_t n = prob.n();
  const std::size_t p = prob.p();
  if (x.rows() != n || x.cols() != n) throw DimensionMismatch("x must be n x n");
  if (y.rows() != n || y.cols() != n) throw DimensionMismatch("y must be n x n");

  Matrix m = Matrix::zero(3 * n + p, 3 * n + p);
  m.set_block(0, 0, y - x);
  m.set_block(0, 2 * n + p, prob.a_bar.conj_transpose());
  m.set_block(n, n, -y);
  m.set_block(n, 2 * n + p, prob.a_dbar.conj_transpose());
  m.set_block(2 * n, 2 * n, (-gamma * gamma) * Matrix::identity(p));
  m.set_block(2 * n, 2 * n + p, prob.d_bar.conj_transpose());
  m.set_block(2 * n + p, 0, prob.a_bar);
  m.set_block(2 * n + p, n, prob.a_dbar);
  m.set_block(2 * n + p, 2 * n, prob.d_bar);
  m.set_block(2 * n + p, 2 * n + p, -inverse(x));
  return hermitize(m);
}

std::optional<std::pair<Matrix, Matrix>> solve_feasibility(
    const LmiProblem& prob, double gamma_sq) {
  prob.validate();
  if (!(gamma_sq > 0.0)) throw std::invalid_argument("gamma_sq must be > 0");

  const std::size_t n = prob.n();
  const double eps = prob.epsilon_margin;
  const std::size_t half = n * (n + 1) / 2;
  const std::size_t nvar = 2 * half;

  // Symmetric basis matrices for the upper-triangle parameterization.
  std::vector<Matrix> basis;
  basis.reserve(half);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Matrix e = Matrix::zero(n, n);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      basis.push_back(e);
    }

  const Matrix zero_n = Matrix::zero(n, n);
  const Matrix f_const = assemble_linear_lmi(prob, zero_n, zero_n, gamma_sq);
  std::vector<Matrix> lmi_basis;
  lmi_basis.reserve(nvar);
  for (std::size_t k = 0; k < half; ++k)
    lmi_basis.push_back(assemble_linear_lmi(prob, basis[k], zero_n, gamma_sq) -
                        f_const);
  for (std::size_t k = 0; k < half; ++k)
    lmi_basis.push_back(assemble_linear_lmi(prob, zero_n, basis[k], gamma_sq) -
                        f_const);

  const auto build_qy = [&](const std::vector<double>& xv) {
    Matrix q = Matrix::zero(n, n);
    Matrix y = Matrix::zero(n, n);
    for (std::size_t k = 0; k < half; ++k) {
      q = q + xv[k] * basis[k];
      y = y + xv[half + k] * basis[k];
    }
    return std::make_pair(q, y);
  };

  // Start at Q = I, Y = I/2 (diagonal basis entries carry weight 1 for the
  // unit diagonal because E_ii has a single 1 there).
  std::vector<double> xv(nvar, 0.0);
  {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j, ++k)
        if (i == j) {
          xv[k] = 1.0;
          xv[half + k] = 0.5;
        }
  }

  const Matrix eye_eps = eps * Matrix::identity(n);
  const auto barrier_value = [&](double t, const std::vector<double>& v)
      -> std::optional<double> {
    const auto [q, y] = build_qy(v);
    const Matrix f = assemble_linear_lmi(prob, q, y, gamma_sq);
    const Matrix s =
        cplx(t) * Matrix::identity(f.rows()) - f;
    const auto ld_s = chol_logdet(s);
    if (!ld_s) return std::nullopt;
    const auto ld_q = chol_logdet(q - eye_eps);
    if (!ld_q) return std::nullopt;
    const auto ld_y = chol_logdet(y - eye_eps);
    if (!ld_y) return std::nullopt;
    return -*ld_s - *ld_q - *ld_y;  // eta * t added by the caller
  };

  auto [q0, y0] = build_qy(xv);
  double t = max_symmetric_eigenvalue(assemble_linear_lmi(prob, q0, y0,
                                                          gamma_sq)) +
             1.0;

  double eta = 1.0;
  const double eta_max = 1e8;
  int total_iters = 0;
  const int iter_cap = 500;

  while (true) {
    const auto [q, y] = build_qy(xv);
    const Matrix f = assemble_linear_lmi(prob, q, y, gamma_sq);
    if (max_symmetric_eigenvalue(f) <= -eps)
      return std::make_pair(q, y);
    if (total_iters >= iter_cap)
      throw Infeasible("no strictly feasible point within iteration budget");
    ++total_iters;

    const Matrix s = cplx(t) * Matrix::identity(f.rows()) - f;
    Matrix s_inv, gq_inv, gy_inv;
    try {
      s_inv = inverse(s);
      gq_inv = inverse(q - eye_eps);
      gy_inv = inverse(y - eye_eps);
    } catch (const SingularMatrix&) {
      throw NumericalFailure("barrier matrices became singular");
    }

    // Gradient and Hessian over (t, xv).
    std::vector<Matrix> m_k;
    m_k.reserve(nvar);
    for (std::size_t k = 0; k < nvar; ++k) m_k.push_back(s_inv * lmi_basis[k]);
    std::vector<Matrix> bq_k(half, Matrix::zero(n, n));
    std::vector<Matrix> by_k(half, Matrix::zero(n, n));
    for (std::size_t k = 0; k < half; ++k) {
      bq_k[k] = gq_inv * basis[k];
      by_k[k] = gy_inv * basis[k];
    }

    std::vector<double> grad(nvar + 1, 0.0);
    grad[0] = eta - re_trace(s_inv);
    for (std::size_t k = 0; k < nvar; ++k) {
      grad[k + 1] = re_trace(m_k[k]);
      if (k < half)
        grad[k + 1] -= re_trace(bq_k[k]);
      else
        grad[k + 1] -= re_trace(by_k[k - half]);
    }

    Matrix hess = Matrix::zero(nvar + 1, nvar + 1);
    hess(0, 0) = re_trace_prod(s_inv, s_inv);
    for (std::size_t k = 0; k < nvar; ++k) {
      const double v = -re_trace_prod(s_inv, m_k[k]);
      hess(0, k + 1) = v;
      hess(k + 1, 0) = v;
    }
    for (std::size_t k = 0; k < nvar; ++k)
      for (std::size_t l = k; l < nvar; ++l) {
        double v = re_trace_prod(m_k[k], m_k[l]);
        if (k < half && l < half) v += re_trace_prod(bq_k[k], bq_k[l]);
        if (k >= half && l >= half)
          v += re_trace_prod(by_k[k - half], by_k[l - half]);
        hess(k + 1, l + 1) = v;
        hess(l + 1, k + 1) = v;
      }

    Matrix rhs = Matrix::zero(nvar + 1, 1);
    for (std::size_t k = 0; k < nvar + 1; ++k) rhs(k, 0) = -grad[k];
    Matrix step;
    try {
      step = lu_solve(hess, rhs);
    } catch (const SingularMatrix&) {
      throw NumericalFailure("barrier Hessian is singular");
    }
    double decrement2 = 0.0;
    for (std::size_t k = 0; k < nvar + 1; ++k)
      decrement2 -= grad[k] * step(k, 0).real();
    if (!std::isfinite(decrement2))
      throw NumericalFailure("Newton step is not finite");

    if (decrement2 * 0.5 <= 1e-11) {
      // Converged for this barrier weight; sharpen or give up.
      if (eta >= eta_max)
        throw Infeasible("barrier converged without reaching the margin");
      eta *= 10.0;
      continue;
    }

    // Armijo backtracking, keeping every trial inside the barrier domain.
    const auto base = barrier_value(t, xv);
    if (!base) throw NumericalFailure("iterate left the barrier domain");
    const double phi0 = eta * t + *base;
    double alpha = 1.0;
    bool moved = false;
    while (alpha >= 1e-12) {
      const double t_try = t + alpha * step(0, 0).real();
      std::vector<double> x_try(xv);
      for (std::size_t k = 0; k < nvar; ++k)
        x_try[k] += alpha * step(k + 1, 0).real();
      const auto val = barrier_value(t_try, x_try);
      if (val) {
        const double phi_try = eta * t_try + *val;
        if (phi_try <= phi0 - 0.25 * alpha * decrement2) {
          t = t_try;
          xv = x_try;
          moved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!moved) {
      if (eta >= eta_max)
        throw Infeasible("line search stalled without reaching the margin");
      eta *= 10.0;
    }
  }
}

namespace {

StabilityCertificate make_certificate(const LmiProblem& prob, const Matrix& q,
                                      const Matrix& y_tilde, double gamma_sq) {
  StabilityCertificate cert;
  cert.q = q;
  cert.y_tilde = y_tilde;
  cert.gamma = std::sqrt(gamma_sq);
  cert.x = inverse(q);
  cert.y = cert.x * y_tilde * cert.x;
  cert.m_full = assemble_bmi(prob, cert.x, cert.y, cert.gamma);
  cert.mu = min_symmetric_eigenvalue(-cert.m_full);
  const std::size_t n = prob.n();
  cert.mu0 = min_symmetric_eigenvalue(-cert.m_full.block(0, 0, 2 * n, 2 * n));
  cert.effective_gain = cert.gamma / std::sqrt(cert.mu);
  cert.lmi_max_eig =
      max_symmetric_eigenvalue(assemble_linear_lmi(prob, q, y_tilde, gamma_sq));
  return cert;
}

}  // namespace

StabilityCertificate minimize_gamma(const LmiProblem& prob, double gamma_hi) {
  prob.validate();
  if (!(gamma_hi > 0.0)) throw std::invalid_argument("gamma_hi must be > 0");

  double hi = gamma_hi * gamma_hi;
  double lo = 0.0;
  const double width_tol = 1e-3 * hi;

  auto point = solve_feasibility(prob, hi);  // throws Infeasible if not
  Matrix best_q = point->first;
  Matrix best_y = point->second;
  double best_gsq = hi;

  while (hi - lo > width_tol) {
    const double mid = 0.5 * (lo + hi);
    try {
      auto trial = solve_feasibility(prob, mid);
      best_q = trial->first;
      best_y = trial->second;
      best_gsq = mid;
      hi = mid;
    } catch (const Infeasible&) {
      lo = mid;
    }
  }
  return make_certificate(prob, best_q, best_y, best_gsq);
}

std::pair<double, double> v0_and_r(const StabilityCertificate& cert,
                                   const std::vector<Matrix>& x_history,
                                   std::size_t tau) {
  if (x_history.size() != tau + 1)
    throw HistoryLengthMismatch("history must hold x(0), x(-1), ..., x(-tau)");
  const std::size_t n = cert.x.rows();
  for (const Matrix& v : x_history)
    if (v.rows() != n || v.cols() != 1)
      throw DimensionMismatch("history entries must be n x 1");

  double v0 = (x_history[0].conj_transpose() * cert.x * x_history[0])(0, 0)
                  .real();
  for (std::size_t i = 1; i <= tau; ++i)
    v0 += (x_history[i].conj_transpose() * cert.y * x_history[i])(0, 0).real();
  const double lam_min = min_symmetric_eigenvalue(cert.x);
  const double r = v0 > 0.0 ? std::sqrt(v0 / lam_min) : 0.0;
  return {v0, r};
}

SufficiencyResult feasibility_sufficient(const LmiProblem& prob, double epsilon,
                                         double gamma) {
  prob.validate();
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0,1)");
  SufficiencyResult res;
  res.sigma_max_f =
      spectral_norm(hstack({prob.a_bar, prob.a_dbar, prob.d_bar}));
  const double bound =
      std::min(std::min(1.0 - epsilon, epsilon), gamma * gamma);
  res.ok = res.sigma_max_f * res.sigma_max_f < bound;
  return res;
}

}  // namespace rbsmc
