#include <cmath>

#include <benchmark/benchmark.h>

#include "spinkin/scenario.hpp"

using namespace spinkin;

static void BM_ClebschGordanTable(benchmark::State& state) {
    for (auto _ : state) {
        double sum = 0.0;
        for (int J = 0; J <= 2; ++J)
            for (int M = -J; M <= J; ++M)
                for (int m1 = -1; m1 <= 1; ++m1)
                    for (int m2 = -1; m2 <= 1; ++m2) sum += clebsch_gordan(1, m1, 1, m2, J, M);
        benchmark::DoNotOptimize(sum);
    }
}
BENCHMARK(BM_ClebschGordanTable);

static void BM_InteractionTensor(benchmark::State& state) {
    const SpinBasis basis = SpinBasis::make(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(build_interaction_tensor(basis, {{0, 1.0}, {2, 0.9}}));
}
BENCHMARK(BM_InteractionTensor);

static void BM_Rk4Rb87(benchmark::State& state) {
    const ScenarioConfig config = rb87_preset();
    const ScenarioSetup setup = prepare(config);
    const auto superop = scenario_superoperator(config, setup, config.dynamics_temperature);
    const SpinDensityMatrix rho0 = prepared_state(config.epsilon);
    for (auto _ : state) benchmark::DoNotOptimize(evolve_rk4(superop, rho0, config.dt, state.range(0), 100));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rk4Rb87)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_Poisson(benchmark::State& state) {
    Grid3 g;
    g.nx = g.ny = g.nz = static_cast<int>(state.range(0));
    g.dx = g.dy = g.dz = 1.0 / (g.nx - 1);
    const auto source = sample(g, [](double x, double y, double z) { return std::sin(3 * x) * y + z; });
    const ScalarField3 boundary(g);
    PoissonOptions options;
    options.method = state.range(1) == 0 ? PoissonMethod::ConjugateGradient : PoissonMethod::Spectral;
    for (auto _ : state) benchmark::DoNotOptimize(solve_scalar_potential(source, boundary, options));
}
BENCHMARK(BM_Poisson)->Args({32, 0})->Args({64, 0})->Args({32, 1})->Args({64, 1})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
