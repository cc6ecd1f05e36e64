#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rbsmc/errors.hpp"
#include "rbsmc/linalg.hpp"
#include "rbsmc/matrix.hpp"
#include "rbsmc/rota_baxter.hpp"
#include "test_util.hpp"

using namespace rbsmc;
using testutil::random_matrix;

namespace {

Matrix e(std::size_t i, std::size_t j) { return Matrix::unit(2, i, j); }

// Peirce corner X -> e11 X e11 as a vectorized map: keeps only entry (0,0).
RotaBaxterOperator corner_map() {
  Matrix m = Matrix::zero(4, 4);
  m(0, 0) = 1.0;
  return RotaBaxterOperator::general(std::move(m), 0.0);
}

double pair_scale(const Matrix& x, const Matrix& y) {
  return 1.0 + frobenius_norm(x) * frobenius_norm(y);
}

}  // namespace

TEST_SUITE("rota_baxter") {

TEST_CASE("apply: scalar scaling and triangular projection") {
  const Matrix a = {{0.8, 0.1}, {-0.2, 0.9}};
  const auto p = RotaBaxterOperator::scalar(0.5, 2);
  CHECK(max_abs_diff(apply(p, a), Matrix{{-0.4, -0.05}, {0.1, -0.45}}) == 0.0);
  CHECK(p.weight() == cplx(0.5));

  const auto pp = RotaBaxterOperator::triangular(2);
  CHECK(pp.weight() == cplx(-1.0));
  CHECK(frobenius_norm(apply(pp, e(1, 0))) == 0.0);
  CHECK(max_abs_diff(apply(pp, Matrix::identity(2)), Matrix::identity(2)) ==
        0.0);

  CHECK_THROWS_AS(apply(pp, Matrix::identity(3)), DimensionMismatch);
}

TEST_CASE("apply: linearity on random samples") {
  std::mt19937_64 rng(5);
  const std::vector<RotaBaxterOperator> ops = {
      RotaBaxterOperator::scalar(cplx(0.3, -1.1), 3),
      RotaBaxterOperator::triangular(3),
      RotaBaxterOperator::general(random_matrix(rng, 9, 9), 1.0)};
  for (const auto& p : ops) {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix x = random_matrix(rng, 3, 3), y = random_matrix(rng, 3, 3);
      const cplx al(0.7, 0.2), be(-1.3, 0.4);
      const Matrix lhs = apply(p, al * x + be * y);
      const Matrix rhs = al * apply(p, x) + be * apply(p, y);
      CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * (1.0 + lhs.max_abs()));
    }
  }
}

TEST_CASE("rb_residual: verified operators vanish, corner map does not") {
  std::mt19937_64 rng(7);
  const std::vector<cplx> lambdas = {-1.0, 0.5, 2.0, cplx(0.0, 1.0)};
  for (std::size_t dim = 2; dim <= 5; ++dim) {
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix x = random_matrix(rng, dim, dim);
      const Matrix y = random_matrix(rng, dim, dim);
      for (const cplx lam : lambdas) {
        const auto p = RotaBaxterOperator::scalar(lam, dim);
        CHECK(rb_residual(p, x, y) <=
              1e-12 * pair_scale(x, y) * (1.0 + std::abs(lam)));
      }
      const auto pp = RotaBaxterOperator::triangular(dim);
      CHECK(rb_residual(pp, x, y) <= 1e-12 * pair_scale(x, y));
    }
  }

  // The corner projection has weight 0 but is not Rota-Baxter:
  // P(I)P(I) - P(I P(I)) - P(P(I) I) = e11 - e11 - e11 = -e11, norm 1.
  CHECK(rb_residual(corner_map(), Matrix::identity(2), Matrix::identity(2)) ==
        1.0);
}

TEST_CASE("induced_bracket: antisymmetry and closed forms") {
  std::mt19937_64 rng(13);
  const auto pp = RotaBaxterOperator::triangular(2);
  const auto ps = RotaBaxterOperator::scalar(cplx(1.5, -0.5), 2);

  const Matrix x = random_matrix(rng, 2, 2);
  CHECK(frobenius_norm(induced_bracket(pp, x, x)) <= 1e-14);

  for (const auto& p : {pp, ps}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix u = random_matrix(rng, 2, 2), v = random_matrix(rng, 2, 2);
      CHECK(max_abs_diff(induced_bracket(p, u, v),
                         -induced_bracket(p, v, u)) <= 1e-13);
    }
  }

  // Scalar scaling: [x,y]_P = -lambda [x,y].
  const Matrix u = random_matrix(rng, 2, 2), v = random_matrix(rng, 2, 2);
  const Matrix comm = u * v - v * u;
  CHECK(max_abs_diff(induced_bracket(ps, u, v), -ps.weight() * comm) <=
        1e-13 * (1.0 + comm.max_abs()));

  // Triangular projection on (e12, e21): the three terms cancel exactly.
  CHECK(frobenius_norm(induced_bracket(pp, e(0, 1), e(1, 0))) == 0.0);
}

TEST_CASE("jacobi_residual: verified operators across dimensions") {
  std::mt19937_64 rng(19);
  for (std::size_t dim = 2; dim <= 4; ++dim) {
    const auto pp = RotaBaxterOperator::triangular(dim);
    const auto ps = RotaBaxterOperator::scalar(0.5, dim);
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix x = random_matrix(rng, dim, dim);
      const Matrix y = random_matrix(rng, dim, dim);
      const Matrix z = random_matrix(rng, dim, dim);
      const double scale =
          1.0 + frobenius_norm(x) * frobenius_norm(y) * frobenius_norm(z);
      CHECK(jacobi_residual(pp, x, y, z) <= 1e-9 * scale);
      CHECK(jacobi_residual(ps, x, y, z) <= 1e-9 * scale);
    }
  }
  const Matrix w = random_matrix(rng, 3, 3);
  CHECK(jacobi_residual(RotaBaxterOperator::triangular(3), w, w, w) <= 1e-13);
}

TEST_CASE("jacobi_residual: corner bracket satisfies Jacobi regardless") {
  // The corner map fails the Rota-Baxter identity (see rb_residual above),
  // yet its induced bracket still satisfies Jacobi: the failure of eq. the
  // operator identity is witnessed at the residual level, not here.
  std::mt19937_64 rng(29);
  const auto corner = corner_map();
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix x = random_matrix(rng, 2, 2);
    const Matrix y = random_matrix(rng, 2, 2);
    const Matrix z = random_matrix(rng, 2, 2);
    worst = std::max(worst, jacobi_residual(corner, x, y, z));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("group3_witness: cancellation triple and random sums") {
  const auto pp = RotaBaxterOperator::triangular(2);
  const auto w = group3_witness(pp, e(0, 1), e(1, 0), e(0, 0));
  CHECK(max_abs_diff(w.g1, e(1, 1) - e(0, 0)) == 0.0);
  CHECK(max_abs_diff(w.g2, e(0, 0) - e(1, 1)) == 0.0);
  CHECK(frobenius_norm(w.h) == 0.0);
  CHECK(frobenius_norm(w.sum) == 0.0);
  CHECK(std::abs(frobenius_norm(w.g1) - std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs(frobenius_norm(w.g2) - std::sqrt(2.0)) <= 1e-15);
  CHECK(max_abs_diff(w.sum, w.g1 + w.h + w.g2) == 0.0);

  // With x = y = z only the sum cancels: g2 dies with [x,x], h folds
  // into -g1, and g1 itself stays nonzero in general.
  std::mt19937_64 rng(31);
  const Matrix x = random_matrix(rng, 2, 2);
  const auto wx = group3_witness(pp, x, x, x);
  CHECK(frobenius_norm(wx.g2) == 0.0);
  CHECK(max_abs_diff(wx.h, cplx(-1.0) * wx.g1) == 0.0);
  CHECK(frobenius_norm(wx.sum) <= 1e-13);

  const auto ps = RotaBaxterOperator::scalar(cplx(0.7, 0.3), 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix u = random_matrix(rng, 3, 3), v = random_matrix(rng, 3, 3),
                 t = random_matrix(rng, 3, 3);
    const double scale =
        1.0 + frobenius_norm(u) * frobenius_norm(v) * frobenius_norm(t);
    CHECK(frobenius_norm(group3_witness(ps, u, v, t).sum) <= 1e-10 * scale);
  }
}

TEST_CASE("rb_comm_residual: bracket compatibility") {
  std::mt19937_64 rng(37);
  const auto pp = RotaBaxterOperator::triangular(2);
  const auto ps = RotaBaxterOperator::scalar(2.0, 2);
  const Matrix x0 = random_matrix(rng, 2, 2);
  CHECK(rb_comm_residual(pp, x0, x0) <= 1e-14);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix x = random_matrix(rng, 2, 2), y = random_matrix(rng, 2, 2);
    CHECK(rb_comm_residual(pp, x, y) <= 1e-10 * pair_scale(x, y));
    CHECK(rb_comm_residual(ps, x, y) <= 1e-10 * pair_scale(x, y));
  }
}

TEST_CASE("commute_with_output: scalar always, projection conditionally") {
  std::mt19937_64 rng(41);
  const auto ps = RotaBaxterOperator::scalar(cplx(0.2, 0.9), 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix c = random_matrix(rng, 3, 3), m = random_matrix(rng, 3, 3);
    CHECK(commute_with_output(ps, c, m) <= 1e-12 * pair_scale(c, m));
  }

  const auto pp = RotaBaxterOperator::triangular(2);
  // Diagonal output maps commute with the projection.
  const Matrix diag = {{2.0, 0.0}, {0.0, -3.0}};
  const Matrix m = random_matrix(rng, 2, 2);
  CHECK(commute_with_output(pp, diag, m) <= 1e-13);

  // Strictly upper c = e12 fails on m = e21: C P(M) = 0 but P(CM) = e11.
  CHECK(commute_with_output(pp, e(0, 1), e(1, 0)) == 1.0);
  // Strictly lower c = e21 happens to commute on these inputs.
  CHECK(commute_with_output(pp, e(1, 0), e(1, 0)) == 0.0);
  CHECK(commute_with_output(pp, e(1, 0), e(0, 1)) == 0.0);
}

TEST_CASE("lie_compat_check: scalar passes, projection separates sl2") {
  const Matrix h = e(0, 0) - e(1, 1);
  const std::vector<Matrix> sl2 = {e(0, 1), e(1, 0), h};

  const auto ps = RotaBaxterOperator::scalar(0.5, 2);
  const auto ok = lie_compat_check(ps, sl2);
  CHECK(ok.closed_under_p);
  CHECK(ok.hyp_residual <= 1e-12);
  CHECK(!ok.witness.has_value());

  const auto pp = RotaBaxterOperator::triangular(2);
  const auto bad = lie_compat_check(pp, sl2);
  CHECK(bad.closed_under_p);  // P+ maps each sl2 basis element into sl2
  CHECK(bad.hyp_residual == 2.0);  // worst pair (e21, h): ||2 e21||
  REQUIRE(bad.witness.has_value());
  CHECK(max_abs_diff(bad.witness->first, e(1, 0)) == 0.0);
  CHECK(max_abs_diff(bad.witness->second, h) == 0.0);
  // The classic separating pair violates the hypothesis too.
  const Matrix lhs = apply(pp, e(0, 1) * e(1, 0) - e(1, 0) * e(0, 1));
  const Matrix rhs = e(0, 1) * apply(pp, e(1, 0)) -
                     apply(pp, e(1, 0)) * e(0, 1);
  CHECK(std::abs(frobenius_norm(lhs - rhs) - std::sqrt(2.0)) <= 1e-15);

  CHECK_THROWS_AS(lie_compat_check(pp, {}), EmptyBasis);
  CHECK_THROWS_AS(lie_compat_check(pp, {Matrix::zero(2, 2)}), EmptyBasis);
}

TEST_CASE("strictly lower products stay strictly lower") {
  std::mt19937_64 rng(43);
  const auto pp = RotaBaxterOperator::triangular(4);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix x = Matrix::zero(4, 4), y = Matrix::zero(4, 4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        x(i, j) = cplx(u(rng), u(rng));
        y(i, j) = cplx(u(rng), u(rng));
      }
    CHECK(frobenius_norm(apply(pp, x * y)) == 0.0);
  }
}

}  // TEST_SUITE
