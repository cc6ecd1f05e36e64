#include "rbsmc/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "rbsmc/errors.hpp"

namespace rbsmc {

Scalar::Scalar(double re, double im) : re(re), im(im) {
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw std::invalid_argument("Scalar: non-finite component");
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), e_(rows * cols, cplx{0.0, 0.0}) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  e_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw DimensionMismatch("Matrix: ragged initializer");
    }
    for (cplx v : r) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw std::invalid_argument("Matrix: non-finite entry");
      }
      e_.push_back(v);
    }
  }
}

Matrix Matrix::zero(std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

Matrix Matrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  Matrix a(n, n);
  a(i, j) = 1.0;
  return a;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r = *this;
  r += o;
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  Matrix r = *this;
  r -= o;
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& v : r.e_) v = -v;
  return r;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw DimensionMismatch("Matrix +: shape mismatch");
  }
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) {
    throw DimensionMismatch("Matrix -: shape mismatch");
  }
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) {
    throw DimensionMismatch("Matrix *: inner dimensions differ");
  }
  Matrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const cplx aik = (*this)(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        r(i, j) += aik * o(k, j);
      }
    }
  }
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::conj_transpose() const {
  Matrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

void Matrix::set_block(std::size_t i, std::size_t j, const Matrix& src) {
  if (i + src.rows_ > rows_ || j + src.cols_ > cols_) {
    throw DimensionMismatch("set_block: block exceeds matrix bounds");
  }
  for (std::size_t r = 0; r < src.rows_; ++r)
    for (std::size_t c = 0; c < src.cols_; ++c)
      (*this)(i + r, j + c) = src(r, c);
}

Matrix Matrix::block(std::size_t i, std::size_t j, std::size_t rows,
                     std::size_t cols) const {
  if (i + rows > rows_ || j + cols > cols_) {
    throw DimensionMismatch("block: region exceeds matrix bounds");
  }
  Matrix r(rows, cols);
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < cols; ++b) r(a, b) = (*this)(i + a, j + b);
  return r;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : e_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::is_real(double tol) const {
  const double bound = tol * (1.0 + max_abs());
  for (const auto& v : e_) {
    if (std::abs(v.imag()) > bound) return false;
  }
  return true;
}

Matrix operator*(cplx s, const Matrix& a) {
  Matrix r = a;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) *= s;
  return r;
}

Matrix operator*(const Matrix& a, cplx s) { return s * a; }

Matrix vec(const Matrix& a) {
  Matrix v(a.rows() * a.cols(), 1);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      v(j * a.rows() + i, 0) = a(i, j);
  return v;
}

Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols) {
  if (v.cols() != 1 || v.rows() != rows * cols) {
    throw DimensionMismatch("unvec: size does not match target shape");
  }
  Matrix a(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) a(i, j) = v(j * rows + i, 0);
  return a;
}

Matrix hstack(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) return {};
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != blocks.front().rows()) {
      throw DimensionMismatch("hstack: row counts differ");
    }
    cols += b.cols();
  }
  Matrix r(blocks.front().rows(), cols);
  std::size_t at = 0;
  for (const auto& b : blocks) {
    r.set_block(0, at, b);
    at += b.cols();
  }
  return r;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("max_abs_diff: shape mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace rbsmc
