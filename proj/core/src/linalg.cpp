#include "rbsmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rbsmc/errors.hpp"

namespace rbsmc {

namespace {

struct LuFactors {
  Matrix lu;               // combined L (unit lower) and U
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

LuFactors lu_factor(const Matrix& a, double pivot_floor) {
  const std::size_t n = a.rows();
  LuFactors f{a, {}, 1, false};
  f.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(f.lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = std::abs(f.lu(i, k));
      if (m > best) {
        best = m;
        piv = i;
      }
    }
    if (best <= pivot_floor) {
      f.singular = true;
      return f;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx m = f.lu(i, k) / f.lu(k, k);
      f.lu(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
    }
  }
  return f;
}

Matrix symmetrize(const Matrix& a) {
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return r;
}

// Givens pair (c real, s complex) with [c s; -conj(s) c] * [x; y] = [r; 0].
void givens(cplx x, cplx y, double& c, cplx& s) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  const double r = std::hypot(ax, ay);
  if (ax == 0.0) {
    c = 0.0;
    s = std::conj(y) / ay;
    return;
  }
  c = ax / r;
  s = x * std::conj(y) / (ax * r);
}

// Eigenvalues of [[a, b], [c, d]].
std::pair<cplx, cplx> eig2(cplx a, cplx b, cplx c, cplx d) {
  const cplx tr = a + d;
  const cplx disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

Matrix hessenberg(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix h = a;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Householder vector for column k below the subdiagonal.
    const std::size_t m = n - k - 1;
    std::vector<cplx> x(m);
    double xnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = h(k + 1 + i, k);
      xnorm += std::norm(x[i]);
    }
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    cplx phase = (std::abs(x[0]) > 0.0) ? x[0] / std::abs(x[0]) : cplx{1.0};
    const cplx alpha = -phase * xnorm;
    x[0] -= alpha;
    double vnorm2 = 0.0;
    for (const auto& v : x) vnorm2 += std::norm(v);
    if (vnorm2 == 0.0) continue;

    Matrix p = Matrix::identity(n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        p(k + 1 + i, k + 1 + j) -= 2.0 * x[i] * std::conj(x[j]) / vnorm2;
    h = p * h * p;  // p is Hermitian and unitary
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return h;
}

}  // namespace

Matrix lu_solve(const Matrix& a, const Matrix& b) {
  if (!a.is_square()) throw DimensionMismatch("lu_solve: a must be square");
  if (b.rows() != a.rows()) {
    throw DimensionMismatch("lu_solve: b row count must match a");
  }
  const std::size_t n = a.rows();
  const double floor = 1e-13 * frobenius_norm(a);
  LuFactors f = lu_factor(a, floor);
  if (f.singular) {
    throw SingularMatrix("lu_solve: pivot below 1e-13 * frobenius_norm(a)");
  }
  Matrix x(n, b.cols());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    // forward substitution on the permuted right-hand side
    std::vector<cplx> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx v = b(f.perm[i], col);
      for (std::size_t j = 0; j < i; ++j) v -= f.lu(i, j) * y[j];
      y[i] = v;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      cplx v = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) v -= f.lu(ii, j) * x(j, col);
      x(ii, col) = v / f.lu(ii, ii);
    }
  }
  return x;
}

Matrix inverse(const Matrix& a) {
  return lu_solve(a, Matrix::identity(a.rows()));
}

cplx lu_det(const Matrix& a) {
  if (!a.is_square()) throw DimensionMismatch("lu_det: a must be square");
  LuFactors f = lu_factor(a, 0.0);
  if (f.singular) return 0.0;
  cplx det = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
  return det;
}

std::vector<Scalar> eigenvalues(const Matrix& a) {
  if (!a.is_square()) throw DimensionMismatch("eigenvalues: a must be square");
  const long n = static_cast<long>(a.rows());
  if (n == 0) return {};
  Matrix h = hessenberg(a);

  const double eps = std::numeric_limits<double>::epsilon();
  const double hnorm = frobenius_norm(h);
  const long max_iter = 100 * n;
  long iter_total = 0;
  long stalled = 0;

  std::vector<Scalar> eig;
  eig.reserve(n);

  auto sub_negligible = [&](long i) {
    const double bound =
        eps * (std::abs(h(i - 1, i - 1)) + std::abs(h(i, i))) + eps * hnorm;
    return std::abs(h(i, i - 1)) <= bound;
  };

  long hi = n - 1;
  while (hi >= 0) {
    for (long i = 1; i <= hi; ++i) {
      if (sub_negligible(i)) h(i, i - 1) = 0.0;
    }
    if (hi == 0) {
      eig.emplace_back(h(0, 0));
      break;
    }
    if (h(hi, hi - 1) == cplx{0.0, 0.0}) {
      eig.emplace_back(h(hi, hi));
      --hi;
      stalled = 0;
      continue;
    }
    if (hi == 1 || h(hi - 1, hi - 2) == cplx{0.0, 0.0}) {
      auto [l1, l2] =
          eig2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      eig.emplace_back(l1);
      eig.emplace_back(l2);
      hi -= 2;
      stalled = 0;
      continue;
    }

    // active block [lo, hi] of size >= 3
    long lo = hi;
    while (lo > 0 && h(lo, lo - 1) != cplx{0.0, 0.0}) --lo;

    if (++iter_total > max_iter) {
      throw NoConvergence("eigenvalues: QR iteration cap exceeded");
    }
    cplx sigma;
    if (++stalled % 12 == 0) {
      // exceptional shift to break stalls on defective blocks
      sigma = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      auto [l1, l2] =
          eig2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      sigma = (std::abs(l1 - h(hi, hi)) < std::abs(l2 - h(hi, hi))) ? l1 : l2;
    }

    // explicit shifted QR sweep: H - sigma*I = QR, then H <- RQ + sigma*I
    for (long i = lo; i <= hi; ++i) h(i, i) -= sigma;
    std::vector<double> cs(hi - lo);
    std::vector<cplx> ss(hi - lo);
    for (long i = lo; i < hi; ++i) {
      double c;
      cplx s;
      givens(h(i, i), h(i + 1, i), c, s);
      cs[i - lo] = c;
      ss[i - lo] = s;
      for (long j = i; j < n; ++j) {
        const cplx t1 = h(i, j);
        const cplx t2 = h(i + 1, j);
        h(i, j) = c * t1 + s * t2;
        h(i + 1, j) = -std::conj(s) * t1 + c * t2;
      }
      h(i + 1, i) = 0.0;
    }
    for (long i = lo; i < hi; ++i) {
      const double c = cs[i - lo];
      const cplx s = ss[i - lo];
      for (long r = 0; r <= i + 1; ++r) {
        const cplx t1 = h(r, i);
        const cplx t2 = h(r, i + 1);
        h(r, i) = c * t1 + std::conj(s) * t2;
        h(r, i + 1) = -s * t1 + c * t2;
      }
    }
    for (long i = lo; i <= hi; ++i) h(i, i) += sigma;
  }
  return eig;
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

bool is_hermitian(const Matrix& a, double tol) {
  if (!a.is_square()) return false;
  const double bound = tol * (1.0 + a.max_abs());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if (std::abs(a(i, j) - std::conj(a(j, i))) > bound) return false;
  return true;
}

std::vector<double> symmetric_eigenvalues(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix m = symmetrize(a);
  const double scale = frobenius_norm(m);
  const double stop = 1e-14 * scale + 1e-300;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(m(p, q));
    if (std::sqrt(off) <= stop) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = m(p, q);
        const double mag = std::abs(apq);
        if (mag <= stop / (double(n) + 1.0)) continue;
        const cplx u = apq / mag;  // phase
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        Matrix g = Matrix::identity(n);
        g(p, p) = c * u;
        g(p, q) = s * u;
        g(q, p) = -s;
        g(q, q) = c;
        m = g.conj_transpose() * m * g;
        m = symmetrize(m);
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

double spectral_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  const Matrix b = a.conj_transpose() * a;
  const auto ev = symmetric_eigenvalues(b);
  const double top = ev.empty() ? 0.0 : std::max(ev.back(), 0.0);
  return std::sqrt(top);
}

double min_symmetric_eigenvalue(const Matrix& a) {
  if (!is_hermitian(a)) {
    throw NotHermitian("min_symmetric_eigenvalue: input is not Hermitian");
  }
  return symmetric_eigenvalues(a).front();
}

double max_symmetric_eigenvalue(const Matrix& a) {
  if (!is_hermitian(a)) {
    throw NotHermitian("max_symmetric_eigenvalue: input is not Hermitian");
  }
  return symmetric_eigenvalues(a).back();
}

bool is_positive_definite(const Matrix& a, double margin) {
  if (!a.is_square()) return false;
  const std::size_t n = a.rows();
  Matrix m = a;
  for (std::size_t i = 0; i < n; ++i) m(i, i) -= margin;

  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * std::conj(l(j, k));
    if (d.real() <= 0.0 || std::abs(d.imag()) > 1e-10 * (1.0 + std::abs(d))) {
      return false;
    }
    const double djj = std::sqrt(d.real());
    l(j, j) = djj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx v = m(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * std::conj(l(j, k));
      l(i, j) = v / djj;
    }
  }
  return true;
}

}  // namespace rbsmc
