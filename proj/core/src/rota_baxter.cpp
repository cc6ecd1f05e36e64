#include "rbsmc/rota_baxter.hpp"

#include <cmath>

#include "rbsmc/errors.hpp"
#include "rbsmc/linalg.hpp"

namespace rbsmc {

namespace {

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

void require_operand(const RotaBaxterOperator& p, const Matrix& x,
                     const char* who) {
  if (!x.is_square() || x.rows() != p.dimension()) {
    throw DimensionMismatch(std::string(who) +
                            ": operand shape does not match operator");
  }
}

}  // namespace

RotaBaxterOperator RotaBaxterOperator::scalar(cplx lambda, std::size_t dim) {
  return {Kind::ScalarScaling, lambda, dim, Matrix{}};
}

RotaBaxterOperator RotaBaxterOperator::triangular(std::size_t dim) {
  return {Kind::TriangularProjection, cplx{-1.0}, dim, Matrix{}};
}

RotaBaxterOperator RotaBaxterOperator::general(Matrix map, cplx weight) {
  if (!map.is_square()) {
    throw DimensionMismatch("RotaBaxterOperator: map must be square");
  }
  const auto n = static_cast<std::size_t>(
      std::llround(std::sqrt(static_cast<double>(map.rows()))));
  if (n * n != map.rows()) {
    throw DimensionMismatch("RotaBaxterOperator: map size must be n^2 x n^2");
  }
  return {Kind::GeneralLinear, weight, n, std::move(map)};
}

Matrix apply(const RotaBaxterOperator& p, const Matrix& x) {
  require_operand(p, x, "apply");
  switch (p.kind()) {
    case RotaBaxterOperator::Kind::ScalarScaling:
      return (-p.weight()) * x;
    case RotaBaxterOperator::Kind::TriangularProjection: {
      Matrix r = x;
      for (std::size_t i = 1; i < r.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j) r(i, j) = 0.0;
      return r;
    }
    case RotaBaxterOperator::Kind::GeneralLinear:
      return unvec(p.map() * vec(x), x.rows(), x.cols());
  }
  throw NumericalFailure("apply: unreachable operator kind");
}

double rb_residual(const RotaBaxterOperator& p, const Matrix& x,
                   const Matrix& y) {
  require_operand(p, x, "rb_residual");
  require_operand(p, y, "rb_residual");
  const Matrix px = apply(p, x);
  const Matrix py = apply(p, y);
  const Matrix lhs = px * py;
  const Matrix rhs =
      apply(p, x * py) + apply(p, px * y) + p.weight() * apply(p, x * y);
  return frobenius_norm(lhs - rhs);
}

Matrix induced_bracket(const RotaBaxterOperator& p, const Matrix& x,
                       const Matrix& y) {
  require_operand(p, x, "induced_bracket");
  require_operand(p, y, "induced_bracket");
  return commutator(apply(p, x), y) + commutator(x, apply(p, y)) +
         p.weight() * commutator(x, y);
}

double jacobi_residual(const RotaBaxterOperator& p, const Matrix& x,
                       const Matrix& y, const Matrix& z) {
  const Matrix s = induced_bracket(p, induced_bracket(p, x, y), z) +
                   induced_bracket(p, induced_bracket(p, y, z), x) +
                   induced_bracket(p, induced_bracket(p, z, x), y);
  return frobenius_norm(s);
}

BracketWitness group3_witness(const RotaBaxterOperator& p, const Matrix& x,
                              const Matrix& y, const Matrix& z) {
  require_operand(p, x, "group3_witness");
  require_operand(p, y, "group3_witness");
  require_operand(p, z, "group3_witness");
  const cplx w = p.weight();
  auto cyc = [](auto&& term, const Matrix& a, const Matrix& b,
                const Matrix& c) {
    return term(a, b, c) + term(b, c, a) + term(c, a, b);
  };
  BracketWitness out;
  out.g1 = w * cyc(
                   [&](const Matrix& a, const Matrix& b, const Matrix& c) {
                     return commutator(commutator(apply(p, a), b), c);
                   },
                   x, y, z);
  out.g2 = w * cyc(
                   [&](const Matrix& a, const Matrix& b, const Matrix& c) {
                     return commutator(commutator(a, b), apply(p, c));
                   },
                   x, y, z);
  out.h = w * cyc(
                  [&](const Matrix& a, const Matrix& b, const Matrix& c) {
                    return commutator(commutator(a, apply(p, b)), c);
                  },
                  x, y, z);
  out.sum = out.g1 + out.h + out.g2;
  return out;
}

double rb_comm_residual(const RotaBaxterOperator& p, const Matrix& x,
                        const Matrix& y) {
  const Matrix lhs = apply(p, induced_bracket(p, x, y));
  const Matrix rhs = commutator(apply(p, x), apply(p, y));
  return frobenius_norm(lhs - rhs);
}

double commute_with_output(const RotaBaxterOperator& p, const Matrix& c,
                           const Matrix& m) {
  require_operand(p, m, "commute_with_output");
  if (c.cols() != m.rows() || c.rows() != c.cols()) {
    throw DimensionMismatch(
        "commute_with_output: c must be square with c.cols() = m.rows()");
  }
  return frobenius_norm(c * apply(p, m) - apply(p, c * m));
}

LieCompatReport lie_compat_check(const RotaBaxterOperator& p,
                                 const std::vector<Matrix>& basis) {
  if (basis.empty()) throw EmptyBasis("lie_compat_check: empty basis");
  for (const auto& b : basis) require_operand(p, b, "lie_compat_check");

  // Orthonormalize the vectorized basis; a span of {0} is as empty as no
  // basis at all.
  std::vector<Matrix> ortho;
  for (const auto& b : basis) {
    Matrix v = vec(b);
    for (const auto& q : ortho) {
      cplx coef = 0.0;
      for (std::size_t i = 0; i < v.rows(); ++i)
        coef += std::conj(q(i, 0)) * v(i, 0);
      v -= coef * q;
    }
    const double nrm = frobenius_norm(v);
    if (nrm > 1e-12 * (1.0 + frobenius_norm(vec(b)))) {
      ortho.push_back((1.0 / nrm) * v);
    }
  }
  if (ortho.empty()) {
    throw EmptyBasis("lie_compat_check: basis spans only the zero matrix");
  }

  auto span_residual = [&](const Matrix& m) {
    Matrix v = vec(m);
    for (const auto& q : ortho) {
      cplx coef = 0.0;
      for (std::size_t i = 0; i < v.rows(); ++i)
        coef += std::conj(q(i, 0)) * v(i, 0);
      v -= coef * q;
    }
    return frobenius_norm(v);
  };

  LieCompatReport rep;
  rep.closed_under_p = true;
  for (const auto& b : basis) {
    const Matrix pb = apply(p, b);
    if (span_residual(pb) > 1e-9 * (1.0 + frobenius_norm(pb))) {
      rep.closed_under_p = false;
    }
  }
  for (const auto& x : basis) {
    for (const auto& y : basis) {
      const double res =
          frobenius_norm(apply(p, commutator(x, y)) -
                         commutator(x, apply(p, y)));
      if (res > rep.hyp_residual) {
        rep.hyp_residual = res;
        if (res > 1e-9 * (1.0 + frobenius_norm(x) * frobenius_norm(y))) {
          rep.witness = std::make_pair(x, y);
        }
      }
    }
  }
  return rep;
}

}  // namespace rbsmc
