#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rbsmc/matrix.hpp"

namespace rbsmc {

/// Linear operator P on square matrices satisfying (or, for negative test
/// cases, failing) the weight-lambda identity
///   P(x)P(y) = P(xP(y)) + P(P(x)y) + lambda * P(xy).
class RotaBaxterOperator {
 public:
  enum class Kind { ScalarScaling, TriangularProjection, GeneralLinear };

  /// P(X) = -lambda * X, weight lambda.
  static RotaBaxterOperator scalar(cplx lambda, std::size_t dim);
  /// Projection onto the upper-triangular part, weight -1.
  static RotaBaxterOperator triangular(std::size_t dim);
  /// Arbitrary linear map given as an n^2 x n^2 matrix acting on
  /// column-stacked vectorizations, with a declared weight.
  static RotaBaxterOperator general(Matrix map, cplx weight);

  Kind kind() const { return kind_; }
  cplx weight() const { return weight_; }
  std::size_t dimension() const { return dim_; }
  const Matrix& map() const { return map_; }

 private:
  RotaBaxterOperator(Kind kind, cplx weight, std::size_t dim, Matrix map)
      : kind_(kind), weight_(weight), dim_(dim), map_(std::move(map)) {}

  Kind kind_;
  cplx weight_;
  std::size_t dim_;
  Matrix map_;  // only for GeneralLinear
};

/// Cyclic-sum decomposition of the weighted three-group terms in the
/// Jacobi-identity expansion of the induced bracket.
struct BracketWitness {
  Matrix g1;
  Matrix g2;
  Matrix h;
  Matrix sum;  // g1 + h + g2
};

struct LieCompatReport {
  bool closed_under_p = false;
  double hyp_residual = 0.0;
  std::optional<std::pair<Matrix, Matrix>> witness;
};

Matrix apply(const RotaBaxterOperator& p, const Matrix& x);

/// Frobenius norm of P(x)P(y) - P(xP(y)) - P(P(x)y) - lambda*P(xy).
double rb_residual(const RotaBaxterOperator& p, const Matrix& x,
                   const Matrix& y);

/// [x,y]_P = [P(x),y] + [x,P(y)] + lambda*[x,y].
Matrix induced_bracket(const RotaBaxterOperator& p, const Matrix& x,
                       const Matrix& y);

/// Frobenius norm of the cyclic sum of nested induced brackets.
double jacobi_residual(const RotaBaxterOperator& p, const Matrix& x,
                       const Matrix& y, const Matrix& z);

BracketWitness group3_witness(const RotaBaxterOperator& p, const Matrix& x,
                              const Matrix& y, const Matrix& z);

/// Frobenius norm of P([x,y]_P) - [P(x),P(y)].
double rb_comm_residual(const RotaBaxterOperator& p, const Matrix& x,
                        const Matrix& y);

/// Frobenius norm of c*P(m) - P(c*m); both products must be well typed,
/// which restricts c to square shape here.
double commute_with_output(const RotaBaxterOperator& p, const Matrix& c,
                           const Matrix& m);

/// Checks closure of the span under P and the compatibility hypothesis
/// P([x,y]) = [x, P(y)] over all basis pairs.
LieCompatReport lie_compat_check(const RotaBaxterOperator& p,
                                 const std::vector<Matrix>& basis);

}  // namespace rbsmc
