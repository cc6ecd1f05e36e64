#pragma once

#include <vector>

#include "rbsmc/matrix.hpp"

namespace rbsmc {

/// Solves a·x = b by LU factorization with partial pivoting.
///
/// Throws SingularMatrix when a pivot magnitude falls below
/// 1e-13 * frobenius_norm(a).
Matrix lu_solve(const Matrix& a, const Matrix& b);

/// Matrix inverse via lu_solve against the identity.
Matrix inverse(const Matrix& a);

/// Determinant via LU with partial pivoting. Never throws on singular
/// input; a vanishing pivot simply yields 0.
cplx lu_det(const Matrix& a);

/// All eigenvalues via Hessenberg reduction followed by Wilkinson-shifted
/// QR iteration. Throws NoConvergence after 100*n iterations.
std::vector<Scalar> eigenvalues(const Matrix& a);

double frobenius_norm(const Matrix& a);

/// Largest singular value, from a cyclic-Jacobi eigensolve of a^H a.
double spectral_norm(const Matrix& a);

bool is_hermitian(const Matrix& a, double tol = 1e-12);

/// Smallest eigenvalue of a Hermitian matrix via cyclic Jacobi.
/// Throws NotHermitian when the symmetry check fails.
double min_symmetric_eigenvalue(const Matrix& a);

/// Largest eigenvalue of a Hermitian matrix via cyclic Jacobi.
double max_symmetric_eigenvalue(const Matrix& a);

/// All eigenvalues of a Hermitian matrix, ascending, via cyclic Jacobi.
std::vector<double> symmetric_eigenvalues(const Matrix& a);

/// True iff the Cholesky factorization of a - margin*I succeeds.
bool is_positive_definite(const Matrix& a, double margin);

}  // namespace rbsmc
