#pragma once

#include <cstddef>
#include <vector>

#include "rbsmc/matrix.hpp"

namespace rbsmc {

/// Companion linearization of x(k+1) = a_bar x(k) + a_dbar x(k-tau):
/// the (1,1) block is a_bar, the (1,tau+1) block is a_dbar, the block
/// subdiagonal holds identities.
struct CompanionForm {
  Matrix f;
  std::size_t n = 0;
  std::size_t tau = 0;

  Matrix a_bar() const { return f.block(0, 0, n, n); }
  Matrix a_dbar() const { return f.block(0, n * tau, n, n); }
};

struct SchurStability {
  bool stable = false;
  double max_modulus = 0.0;
};

CompanionForm build_companion(const Matrix& a_bar, const Matrix& a_dbar,
                              std::size_t tau);

/// All n(tau+1) roots of det(z^{tau+1} I - z^tau a_bar - a_dbar) = 0,
/// obtained as the eigenvalues of the companion matrix.
std::vector<Scalar> delayed_spectrum(const CompanionForm& form);

/// stable iff max |z| < 1 - 1e-9 over the delayed spectrum.
SchurStability is_schur_stable(const CompanionForm& form);

/// |det(z^{tau+1} I - z^tau a_bar - a_dbar)| by LU; near zero exactly at
/// the spectrum.
double char_poly_residual(const CompanionForm& form, const Scalar& z);

}  // namespace rbsmc
