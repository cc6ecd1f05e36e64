#include <benchmark/benchmark.h>

#include <random>

#include "rbsmc/linalg.hpp"
#include "rbsmc/lyapunov_lmi.hpp"
#include "rbsmc/simulator.hpp"
#include "rbsmc/smc_design.hpp"
#include "rbsmc/spectral_delay.hpp"

namespace {

using namespace rbsmc;

Matrix seeded_matrix(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(u(rng), u(rng));
  return m;
}

DelayedSystem worked_system() {
  DelayedSystem sys;
  sys.a = {{0.8, 0.1}, {-0.2, 0.9}};
  sys.a_d = {{0.05, 0.0}, {0.0, 0.05}};
  sys.b = {{0.5}, {1.0}};
  sys.c = {{1.0, 0.5}};
  sys.d = {{0.1}, {0.1}};
  sys.tau = 1;
  sys.delta_max = 0.1;
  return sys;
}

void bm_eigenvalues(benchmark::State& state) {
  const Matrix a = seeded_matrix(7, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(a));
}
BENCHMARK(bm_eigenvalues)->Arg(4)->Arg(8)->Arg(16);

void bm_spectral_norm(benchmark::State& state) {
  const Matrix a = seeded_matrix(11, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(a));
}
BENCHMARK(bm_spectral_norm)->Arg(8)->Arg(16);

void bm_solve_feasibility(benchmark::State& state) {
  const DeformedSystem def =
      deform(worked_system(), RotaBaxterOperator::scalar(cplx(0.5), 2));
  const LmiProblem prob = LmiProblem::from_deformed(def, 1e-6);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_feasibility(prob, 1.0));
}
BENCHMARK(bm_solve_feasibility);

void bm_simulate_closed(benchmark::State& state) {
  const DelayedSystem sys = worked_system();
  const DeformedSystem def =
      deform(sys, RotaBaxterOperator::scalar(cplx(0.5), 2));
  DesignState design;
  design.k = {{1.0, 0.5}};
  design.phi = 0.5;
  design.rho = 0.2;
  const std::vector<Matrix> hist = {Matrix{{0.5}, {0.5}},
                                    Matrix::zero(2, 1)};
  const auto n_steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate(sys, def, design, nullptr,
                                      Trajectory::Mode::ClosedLoop, n_steps,
                                      DisturbanceSpec::uniform(42), hist));
}
BENCHMARK(bm_simulate_closed)->Arg(200)->Arg(1000);

void bm_companion_spectrum(benchmark::State& state) {
  const std::size_t n = 3, tau = 3;
  const Matrix a_bar = 0.5 * seeded_matrix(13, n);
  const Matrix a_dbar = 0.25 * seeded_matrix(17, n);
  const CompanionForm form = build_companion(a_bar, a_dbar, tau);
  for (auto _ : state) benchmark::DoNotOptimize(delayed_spectrum(form));
}
BENCHMARK(bm_companion_spectrum);

}  // namespace

BENCHMARK_MAIN();
