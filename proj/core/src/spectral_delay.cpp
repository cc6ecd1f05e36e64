#include "rbsmc/spectral_delay.hpp"

#include <cmath>
#include <complex>

#include "rbsmc/errors.hpp"
#include "rbsmc/linalg.hpp"

namespace rbsmc {

CompanionForm build_companion(const Matrix& a_bar, const Matrix& a_dbar,
                              std::size_t tau) {
  const std::size_t n = a_bar.rows();
  if (n == 0 || a_bar.cols() != n)
    throw DimensionMismatch("a_bar must be square");
  if (a_dbar.rows() != n || a_dbar.cols() != n)
    throw DimensionMismatch("a_dbar must match a_bar");
  if (tau < 1) throw DimensionMismatch("tau must be >= 1");

  CompanionForm form;
  form.n = n;
  form.tau = tau;
  form.f = Matrix::zero(n * (tau + 1), n * (tau + 1));
  form.f.set_block(0, 0, a_bar);
  form.f.set_block(0, n * tau, a_dbar);
  for (std::size_t k = 0; k < tau; ++k)
    form.f.set_block(n * (k + 1), n * k, Matrix::identity(n));
  return form;
}

std::vector<Scalar> delayed_spectrum(const CompanionForm& form) {
  return eigenvalues(form.f);
}

SchurStability is_schur_stable(const CompanionForm& form) {
  SchurStability res;
  for (const Scalar& z : delayed_spectrum(form))
    res.max_modulus = std::max(res.max_modulus, z.modulus());
  res.stable = res.max_modulus < 1.0 - 1e-9;
  return res;
}

double char_poly_residual(const CompanionForm& form, const Scalar& z) {
  const cplx zc(z.re, z.im);
  const cplx z_tau = std::pow(zc, static_cast<double>(form.tau));
  const Matrix m = (z_tau * zc) * Matrix::identity(form.n) -
                   z_tau * form.a_bar() - form.a_dbar();
  return std::abs(lu_det(m));
}

}  // namespace rbsmc
