#include <cmath>

#include <benchmark/benchmark.h>

#include "ionlab/classical.hpp"
#include "ionlab/hf.hpp"
#include "ionlab/liquid_drop.hpp"
#include "ionlab/radial.hpp"
#include "ionlab/tf.hpp"

namespace {

void BM_NewtonPotential(benchmark::State& state) {
  auto grid = ionlab::make_log_grid(1e-4, 1e2, static_cast<std::size_t>(state.range(0)));
  auto rho = ionlab::RadialField::from_function(
      grid, [](double r) { return std::exp(-r); }, ionlab::FieldKind::density);
  for (auto _ : state) benchmark::DoNotOptimize(ionlab::newton_potential(rho));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NewtonPotential)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_SolveTF(benchmark::State& state) {
  const ionlab::TFParams params{.Z = static_cast<double>(state.range(0)),
                                .N = 0.5 * static_cast<double>(state.range(0))};
  auto grid = ionlab::tf_grid(params.Z, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(ionlab::solve_tf(params, grid));
}
BENCHMARK(BM_SolveTF)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_HFEnergy(benchmark::State& state) {
  const auto basis = ionlab::random_sgauss_basis(7, static_cast<int>(state.range(0)));
  const Eigen::MatrixXd gamma =
      Eigen::MatrixXd::Identity(state.range(0), state.range(0)) * (2.0 / state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ionlab::hf_energy(gamma, basis));
}
BENCHMARK(BM_HFEnergy)->Arg(4)->Arg(8)->Arg(12);

void BM_ExactDiagonalization(benchmark::State& state) {
  const auto basis = ionlab::random_sgauss_basis(11, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ionlab::exact_diagonalization(basis, 3));
  }
}
BENCHMARK(BM_ExactDiagonalization)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_BetaValue(benchmark::State& state) {
  const auto config = ionlab::fibonacci_sphere(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ionlab::beta_value(config));
}
BENCHMARK(BM_BetaValue)->Arg(50)->Arg(200);

void BM_BallMonteCarlo(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ionlab::ball_monte_carlo(1.0, state.range(0), 1));
  }
}
BENCHMARK(BM_BallMonteCarlo)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
