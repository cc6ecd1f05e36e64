#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "rbsmc/errors.hpp"
#include "rbsmc/linalg.hpp"
#include "rbsmc/lyapunov_lmi.hpp"
#include "rbsmc/matrix.hpp"
#include "rbsmc/rota_baxter.hpp"
#include "rbsmc/smc_design.hpp"
#include "test_util.hpp"

using namespace rbsmc;
using testutil::random_matrix;
using testutil::random_spd;

namespace {

LmiProblem siso_problem(double eps = 1e-6) {
  const DeformedSystem def =
      deform(testutil::siso_system(), RotaBaxterOperator::scalar(0.5, 2));
  return LmiProblem::from_deformed(def, eps);
}

LmiProblem scalar_problem() {
  LmiProblem prob;
  prob.a_bar = Matrix{{0.5}};
  prob.a_dbar = Matrix{{0.2}};
  prob.d_bar = Matrix{{0.1}};
  return prob;
}

}  // namespace

TEST_SUITE("lyapunov_lmi") {

TEST_CASE("from_deformed and validate") {
  const LmiProblem prob = siso_problem(1e-5);
  CHECK(prob.n() == 2);
  CHECK(prob.p() == 1);
  CHECK(prob.epsilon_margin == 1e-5);
  CHECK(max_abs_diff(prob.a_bar,
                     Matrix{{-0.225, 0.0875}, {0.450, -0.175}}) <= 1e-12);
  const auto layout = prob.block_layout();
  CHECK(layout[0] + layout[1] + layout[2] + layout[3] == 7);

  LmiProblem bad = prob;
  bad.a_dbar = Matrix::identity(3);
  CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
}

TEST_CASE("assemble_linear_lmi: scalar case entry by entry") {
  const Matrix m =
      assemble_linear_lmi(scalar_problem(), Matrix{{2.0}}, Matrix{{0.5}}, 1.0);
  const Matrix expected = {{-1.5, 0.0, 0.0, 1.0},
                           {0.0, -0.5, 0.0, 0.4},
                           {0.0, 0.0, -1.0, 0.1},
                           {1.0, 0.4, 0.1, -2.0}};
  CHECK(max_abs_diff(m, expected) <= 1e-15);
}

TEST_CASE("assemble_bmi and assemble_schur: scalar case") {
  const LmiProblem prob = scalar_problem();
  const Matrix bmi = assemble_bmi(prob, Matrix{{0.5}}, Matrix{{0.125}}, 1.0);
  const Matrix bmi_expected = {{-0.25, 0.05, 0.025},
                               {0.05, -0.105, 0.01},
                               {0.025, 0.01, -0.995}};
  CHECK(max_abs_diff(bmi, bmi_expected) <= 1e-15);

  const Matrix sch = assemble_schur(prob, Matrix{{0.5}}, Matrix{{0.125}}, 1.0);
  const Matrix sch_expected = {{-0.375, 0.0, 0.0, 0.5},
                               {0.0, -0.125, 0.0, 0.2},
                               {0.0, 0.0, -1.0, 0.1},
                               {0.5, 0.2, 0.1, -2.0}};
  CHECK(max_abs_diff(sch, sch_expected) <= 1e-15);
}

TEST_CASE("assemblies are Hermitian for Hermitian inputs") {
  std::mt19937_64 rng(53);
  LmiProblem prob;
  prob.a_bar = random_matrix(rng, 3, 3);
  prob.a_dbar = random_matrix(rng, 3, 3);
  prob.d_bar = random_matrix(rng, 3, 2);
  const Matrix q = random_spd(rng, 3), yt = random_spd(rng, 3);
  CHECK(is_hermitian(assemble_linear_lmi(prob, q, yt, 0.7)));
  CHECK(is_hermitian(assemble_bmi(prob, q, yt, 0.7)));
  CHECK(is_hermitian(assemble_schur(prob, q, yt, 0.7)));
}

TEST_CASE("Schur form and BMI agree in sign; congruence links to the LMI") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const std::size_t p = 1 + trial % 2;
    LmiProblem prob;
    prob.a_bar = random_matrix(rng, n, n);
    prob.a_dbar = random_matrix(rng, n, n);
    prob.d_bar = random_matrix(rng, n, p);

    const Matrix x = random_spd(rng, n, 0.5);
    const Matrix y = 0.5 * x;
    const double gamma = 1.0;

    // Scale the dynamics down until the point is feasible; the diagonal
    // part diag(-x/2, -x/2, -I) keeps a strictly negative margin.
    const double fnorm = spectral_norm(
        hstack({prob.a_bar, prob.a_dbar, prob.d_bar}));
    const double shrink = 0.3 / (1.0 + fnorm * spectral_norm(x));
    prob.a_bar = shrink * prob.a_bar;
    prob.a_dbar = shrink * prob.a_dbar;
    prob.d_bar = shrink * prob.d_bar;

    const Matrix bmi = assemble_bmi(prob, x, y, gamma);
    const Matrix sch = assemble_schur(prob, x, y, gamma);
    CHECK(max_symmetric_eigenvalue(bmi) < 0.0);
    CHECK(max_symmetric_eigenvalue(sch) < 0.0);

    // Congruence with diag(Q, Q, I, I), Q = X^{-1}: exactly the linear form
    // in the substituted variables (Q, Q Y Q, gamma^2).
    const Matrix q = inverse(x);
    Matrix sigma = Matrix::zero(3 * n + p, 3 * n + p);
    sigma.set_block(0, 0, q);
    sigma.set_block(n, n, q);
    sigma.set_block(2 * n, 2 * n, Matrix::identity(p));
    sigma.set_block(2 * n + p, 2 * n + p, Matrix::identity(n));
    const Matrix congruent = sigma.conj_transpose() * sch * sigma;
    const Matrix linear =
        assemble_linear_lmi(prob, q, q * y * q, gamma * gamma);
    CHECK(max_abs_diff(congruent, linear) <=
          1e-9 * (1.0 + linear.max_abs()));

    // Blowing the dynamics back up breaks both forms together.
    LmiProblem big = prob;
    const double grow = 40.0 * (1.0 + spectral_norm(q));
    big.a_bar = grow * prob.a_bar;
    big.a_dbar = grow * prob.a_dbar;
    big.d_bar = grow * prob.d_bar;
    CHECK(max_symmetric_eigenvalue(assemble_bmi(big, x, y, gamma)) > 0.0);
    CHECK(max_symmetric_eigenvalue(assemble_schur(big, x, y, gamma)) > 0.0);
  }
}

TEST_CASE("solve_feasibility: worked example is feasible at gamma 0.24") {
  const LmiProblem prob = siso_problem();
  const auto point = solve_feasibility(prob, 0.24 * 0.24);
  REQUIRE(point.has_value());
  const auto& [q, yt] = *point;

  CHECK(is_hermitian(q, 1e-10));
  CHECK(is_hermitian(yt, 1e-10));
  // Trial points stay strictly inside the definiteness barrier.
  CHECK(is_positive_definite(q, 0.5 * prob.epsilon_margin));
  CHECK(is_positive_definite(yt, 0.5 * prob.epsilon_margin));

  const Matrix lmi = assemble_linear_lmi(prob, q, yt, 0.24 * 0.24);
  CHECK(max_symmetric_eigenvalue(lmi) <= -0.5 * prob.epsilon_margin);
}

TEST_CASE("solve_feasibility: monotone in gamma, infeasible when unstable") {
  const LmiProblem prob = siso_problem();
  CHECK(solve_feasibility(prob, 0.5 * 0.5).has_value());

  LmiProblem unstable;
  unstable.a_bar = 1.2 * Matrix::identity(2);
  unstable.a_dbar = Matrix::zero(2, 2);
  unstable.d_bar = Matrix{{0.1}, {0.1}};
  CHECK_THROWS_AS(solve_feasibility(unstable, 100.0), Infeasible);
}

TEST_CASE("minimize_gamma: certificate for the worked example") {
  const StabilityCertificate cert = minimize_gamma(siso_problem(), 1.0);

  // Bisection on gamma^2 over [0, 1] with relative width 1e-3 terminates
  // at 2^-10, every midpoint feasible: gamma* = 2^-5.
  CHECK(std::abs(cert.gamma - 0.03125) <= 1e-12);
  CHECK(cert.lmi_max_eig <= -5e-7);

  // Derived blocks are consistent.
  CHECK(max_abs_diff(cert.x, inverse(cert.q)) <= 1e-8);
  CHECK(max_abs_diff(cert.y, cert.x * cert.y_tilde * cert.x) <= 1e-8);
  CHECK(is_hermitian(cert.m_full, 1e-9));
  CHECK(max_abs_diff(cert.m_full,
                     assemble_bmi(siso_problem(), cert.x, cert.y,
                                  cert.gamma)) <= 1e-9);

  CHECK(cert.mu > 0.0);
  CHECK(cert.mu0 > 0.0);
  CHECK(cert.mu <= cert.mu0 + 1e-12);  // minimum over a larger block
  // mu can never exceed the gamma^2 block of -M.
  CHECK(cert.mu <= cert.gamma * cert.gamma + 1e-12);
  CHECK(std::abs(cert.effective_gain - cert.gamma / std::sqrt(cert.mu)) <=
        1e-9);

  // mu and mu0 recompute from the stored blocks.
  const std::size_t n = 2;
  CHECK(std::abs(cert.mu - min_symmetric_eigenvalue(-cert.m_full)) <= 1e-12);
  const Matrix lead = (-cert.m_full).block(0, 0, 2 * n, 2 * n);
  CHECK(std::abs(cert.mu0 - min_symmetric_eigenvalue(lead)) <= 1e-12);

  // v0 and r are deferred to the history charge.
  CHECK(cert.v0 == 0.0);
  CHECK(cert.r == 0.0);
}

TEST_CASE("minimize_gamma: zero disturbance channel drives gamma down") {
  LmiProblem prob = siso_problem();
  prob.d_bar = Matrix::zero(2, 1);
  const StabilityCertificate cert = minimize_gamma(prob, 1.0);
  CHECK(cert.gamma <= 0.04);  // bisection floor of the [0, 1] interval
  CHECK(cert.lmi_max_eig <= -5e-7);
}

TEST_CASE("minimize_gamma: infeasible problem propagates") {
  LmiProblem unstable;
  unstable.a_bar = 2.0 * Matrix::identity(2);
  unstable.a_dbar = Matrix::zero(2, 2);
  unstable.d_bar = Matrix{{0.1}, {0.1}};
  CHECK_THROWS_AS(minimize_gamma(unstable, 1.0), Infeasible);
}

TEST_CASE("v0_and_r: exact quadratic forms") {
  StabilityCertificate cert;
  cert.x = Matrix{{4.0, 0.0}, {0.0, 1.0}};
  cert.y = Matrix::identity(2);

  const std::vector<Matrix> history = {Matrix{{1.0}, {0.0}},
                                       Matrix{{0.0}, {3.0}}};
  const auto [v0, r] = v0_and_r(cert, history, 1);
  CHECK(std::abs(v0 - 13.0) <= 1e-14);
  CHECK(std::abs(r - std::sqrt(13.0)) <= 1e-12);

  // Quadratic scaling of the history.
  const std::vector<Matrix> doubled = {2.0 * history[0], 2.0 * history[1]};
  const auto [v0d, rd] = v0_and_r(cert, doubled, 1);
  CHECK(std::abs(v0d - 4.0 * v0) <= 1e-12);
  CHECK(std::abs(rd - 2.0 * r) <= 1e-12);

  // Zero history: zero energy, zero radius.
  const std::vector<Matrix> rest = {Matrix::zero(2, 1), Matrix::zero(2, 1)};
  const auto [v00, r00] = v0_and_r(cert, rest, 1);
  CHECK(v00 == 0.0);
  CHECK(r00 == 0.0);

  CHECK_THROWS_AS(v0_and_r(cert, history, 2), HistoryLengthMismatch);
}

TEST_CASE("regression fixture: reported feasible point checks out") {
  const LmiProblem prob = siso_problem();
  const Matrix q = testutil::fixture_q();
  const Matrix yt = testutil::fixture_y_tilde();
  const double g = testutil::kFixtureGamma;

  // The fixture satisfies the linear form with a solid margin.
  CHECK(max_symmetric_eigenvalue(assemble_linear_lmi(prob, q, yt, g * g)) <
        -1e-3);

  const Matrix x = inverse(q);
  const Matrix y = x * yt * x;
  const Matrix m_full = assemble_bmi(prob, x, y, g);
  const double mu = min_symmetric_eigenvalue(-m_full);
  const double lam = min_symmetric_eigenvalue(x);
  CHECK(std::abs(lam - 0.294) <= 0.01);
  CHECK(mu > 0.0);
  CHECK(mu <= g * g);  // structural ceiling on mu

  const std::vector<Matrix> history = {Matrix{{0.5}, {0.5}},
                                       Matrix::zero(2, 1)};
  StabilityCertificate cert;
  cert.x = x;
  cert.y = y;
  const auto [v0, r] = v0_and_r(cert, history, 1);
  // Exact rational: x0^T Q^{-1} x0 = 0.25 * 5.29 / det(Q), det(Q) = 9.2046.
  CHECK(std::abs(v0 - 1.3225 / 9.2046) <= 1e-13);
  CHECK(std::abs(r - std::sqrt(v0 / lam)) <= 1e-12);
}

TEST_CASE("feasibility_sufficient: small-gain style bound") {
  // F = [0.5 0.2 0.1] is a row, so sigma_max is its euclidean norm.
  const auto easy = feasibility_sufficient(scalar_problem(), 0.5, 1.0);
  CHECK(std::abs(easy.sigma_max_f - std::sqrt(0.30)) <= 1e-12);
  CHECK(easy.ok);

  // Tight gamma removes the margin: 0.30 > 0.09.
  CHECK(!feasibility_sufficient(scalar_problem(), 0.5, 0.3).ok);

  // The condition is sufficient, never necessary: the worked example is
  // certifiable yet fails the crude bound.
  const auto hard = feasibility_sufficient(siso_problem(), 0.5, 0.24);
  CHECK(!hard.ok);
  CHECK(hard.sigma_max_f > 0.5);
}

}  // TEST_SUITE
