#include <benchmark/benchmark.h>

#include <cmath>

#include "bwl/maximal.hpp"
#include "bwl/oscillation.hpp"
#include "bwl/weights.hpp"

using namespace bwl;

static void BM_WeightConstantPower(benchmark::State& state) {
    const LambdaMeasure mu(1.0);
    const Window w(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto rep = weight_constant(Weight::power(1.0), 2.0, mu, ClassKind::ap_lambda(), w, 5);
        benchmark::DoNotOptimize(rep.value);
    }
}
BENCHMARK(BM_WeightConstantPower)->Arg(6)->Arg(10);

static void BM_WeightConstantTabulated(benchmark::State& state) {
    const LambdaMeasure mu(0.5);
    const Window w(3);
    GridFunction g = GridFunction::sample(w, static_cast<int>(state.range(0)),
                                          [](double t) { return 1.0 + std::sin(t) * 0.5; });
    const Weight wt{GridFunction(g)};
    for (auto _ : state) {
        auto rep = weight_constant(wt, 2.0, mu, ClassKind::ap_lambda_tilde(), w, 5);
        benchmark::DoNotOptimize(rep.value);
    }
}
BENCHMARK(BM_WeightConstantTabulated)->Arg(8)->Arg(10);

static void BM_MaximalGrid(benchmark::State& state) {
    const LambdaMeasure mu(1.0);
    const int L = static_cast<int>(state.range(0));
    const Window w(L);
    GridFunction f = GridFunction::indicator(w, L, 0.5, 1.0);
    for (auto _ : state) {
        auto M = lambda_maximal_grid(f, mu);
        benchmark::DoNotOptimize(M.values().data());
    }
    state.SetComplexityN(1 << (2 * L));
}
BENCHMARK(BM_MaximalGrid)->Arg(5)->Arg(7)->Arg(9)->Complexity();

static void BM_CzDecompose(benchmark::State& state) {
    const LambdaMeasure mu(0.5);
    const Window w(3);
    GridFunction f = GridFunction::sample(w, static_cast<int>(state.range(0)),
                                          [](double t) { return std::sin(5 * t) + 1.2; });
    for (auto _ : state) {
        auto d = cz_decompose(f, mu, 1.0);
        benchmark::DoNotOptimize(d.selected.size());
    }
}
BENCHMARK(BM_CzDecompose)->Arg(8)->Arg(10);

static void BM_BmoNorm(benchmark::State& state) {
    const LambdaMeasure mu(0.5);
    const Window w(4);
    GridFunction f = GridFunction::sample(w, 8, [](double t) { return std::log(t); });
    for (auto _ : state) {
        auto r = bmo_norm(f, mu, static_cast<int>(state.range(0)), BmoKind::nu_lambda);
        benchmark::DoNotOptimize(r.norm);
    }
}
BENCHMARK(BM_BmoNorm)->Arg(3)->Arg(5);

BENCHMARK_MAIN();
