// Serial reference vs OpenMP for each data-parallel kernel.

#include "kyle/equilibrium.hpp"
#include "kyle/frontier.hpp"
#include "kyle/gaussian.hpp"
#include "kyle/metrics.hpp"

#include <benchmark/benchmark.h>

using namespace kyle;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_ArgmaxSweep(benchmark::State& state) {
    const auto pen = Penalty::constant_above(0.2, 0.1);
    ArgmaxGrid grid;
    grid.v_points = 2001;
    grid.x_points = 2001;
    for (auto _ : state) benchmark::DoNotOptimize(solve_demand_numeric(pen, grid, mode(state)));
}

void BM_MonteCarlo(benchmark::State& state) {
    const auto sol = solve_equilibrium(Penalty::surface(0.5, 0.75));
    for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_metrics(sol, 200000, 7, mode(state)));
}

void BM_SurfaceGrid(benchmark::State& state) {
    const auto gens = sample_index_set(400);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_surface(gens, mode(state)));
}

void BM_GaussianPriceUpdate(benchmark::State& state) {
    const GaussianGrid grid;
    const auto X = grid.v_grid();
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_price_update(X, grid, mode(state)));
}

void BM_GaussianBestResponse(benchmark::State& state) {
    const GaussianGrid grid;
    std::vector<double> P = grid.d_grid();
    for (auto& p : P) p *= 0.5;
    const auto pen = Penalty::constant_above(1.0, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_best_response(P, pen, grid, mode(state)));
}

} // namespace

BENCHMARK(BM_ArgmaxSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SurfaceGrid)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaussianPriceUpdate)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaussianBestResponse)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
