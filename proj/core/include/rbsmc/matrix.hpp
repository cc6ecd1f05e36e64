#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace rbsmc {

using cplx = std::complex<double>;

/// Complex scalar whose constructors reject non-finite components.
struct Scalar {
  double re = 0.0;
  double im = 0.0;

  Scalar() = default;
  Scalar(double re, double im = 0.0);
  Scalar(cplx z) : Scalar(z.real(), z.imag()) {}

  operator cplx() const { return {re, im}; }
  double modulus() const { return std::abs(cplx{re, im}); }
};

/// Dense complex matrix, row-major storage.
///
/// All numerical modules share this one carrier; real-valued data flows
/// through it with zero imaginary parts.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static Matrix zero(std::size_t rows, std::size_t cols);
  static Matrix identity(std::size_t n);
  /// Elementary matrix e_{ij} (1-based indices would invite mistakes; these
  /// are 0-based like everything else here).
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return e_[i * cols_ + j];
  }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix operator*(const Matrix& o) const;
  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  bool operator==(const Matrix& o) const;

  Matrix transpose() const;
  Matrix conj_transpose() const;

  /// Copies `src` into this matrix with its (0,0) entry at (i, j).
  void set_block(std::size_t i, std::size_t j, const Matrix& src);
  Matrix block(std::size_t i, std::size_t j, std::size_t rows,
               std::size_t cols) const;

  /// Largest entry magnitude; 0 for empty matrices.
  double max_abs() const;
  /// True when every entry has |imag| <= tol * (1 + max_abs()).
  bool is_real(double tol = 1e-12) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> e_;
};

Matrix operator*(cplx s, const Matrix& a);
Matrix operator*(const Matrix& a, cplx s);

/// Column-stacked vectorization: vec(X)[j*n + i] = X(i, j).
Matrix vec(const Matrix& a);
Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols);

/// Horizontal concatenation [a b ...]; all blocks must share a row count.
Matrix hstack(const std::vector<Matrix>& blocks);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace rbsmc
