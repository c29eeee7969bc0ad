#include <benchmark/benchmark.h>

#include <memory>

#include "maxent/density.hpp"
#include "maxent/hjb.hpp"
#include "maxent/log_diffusion.hpp"
#include "maxent/monte_carlo.hpp"

namespace maxent {
namespace {

void BM_ImplicitStep(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Grid grid = make_grid(N, N, 1.0);
  const std::vector<double> v_next(static_cast<std::size_t>(N) + 1, 0.0);
  const SchemeConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(implicit_step(v_next, grid, cfg));
  state.SetComplexityN(N);
}
BENCHMARK(BM_ImplicitStep)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_SolveHjb(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Grid grid = make_grid(N, N, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_hjb(grid, SchemeConfig{}));
}
BENCHMARK(BM_SolveHjb)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ExplicitSweep(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const double d = 4.0;
  const Grid grid = make_grid(N, static_cast<int>(d * N * N), 1.0);
  SchemeConfig cfg;
  cfg.cap_d = d;
  cfg.scheme = Scheme::Explicit;
  for (auto _ : state) benchmark::DoNotOptimize(solve_hjb(grid, cfg));
}
BENCHMARK(BM_ExplicitSweep)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_LogDiffusion(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Grid grid = make_grid(N, N, 1.0);
  LadderConfig cfg;
  cfg.regularisation_n = 4;
  for (auto _ : state) benchmark::DoNotOptimize(solve_log_diffusion(grid, cfg));
}
BENCHMARK(BM_LogDiffusion)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ForwardDensity(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Grid grid = make_grid(N, N, 1.0);
  const SchemeConfig cfg;
  auto control = std::make_shared<const ControlField>(
      optimal_control_field(solve_hjb(grid, cfg), cfg));
  const auto model = VolatilityModel::early_termination(control);
  for (auto _ : state) benchmark::DoNotOptimize(solve_forward_density(model, grid, 0.5));
}
BENCHMARK(BM_ForwardDensity)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const Grid grid = make_grid(200, 200, 1.0);
  const SchemeConfig cfg;
  const ControlField control = optimal_control_field(solve_hjb(grid, cfg), cfg);
  SimConfig sim;
  sim.n_paths = state.range(0);
  sim.dt = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(control, sim));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace maxent

BENCHMARK_MAIN();
