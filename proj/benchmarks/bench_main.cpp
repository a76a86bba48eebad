#include <benchmark/benchmark.h>

#include "rcmf/arith.hpp"
#include "rcmf/counting.hpp"
#include "rcmf/dependence.hpp"
#include "rcmf/halasz.hpp"
#include "rcmf/simulate.hpp"

using namespace rcmf;

namespace {

const SpfTable& table() {
    static SpfTable t = build_spf(1'000'000);
    return t;
}

} // namespace

static void BM_BuildSpf(benchmark::State& state) {
    for (auto _ : state) {
        SpfTable t = build_spf(state.range(0));
        benchmark::DoNotOptimize(t.spf.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildSpf)->Arg(100'000)->Arg(1'000'000)->Complexity();

static void BM_ScanUniform(benchmark::State& state) {
    const long long k = state.range(0);
    for (auto _ : state) {
        auto hits = scan_dependences_uniform(k, 1000, table());
        benchmark::DoNotOptimize(hits.data());
    }
}
BENCHMARK(BM_ScanUniform)->Arg(5)->Arg(9)->Arg(13);

static void BM_ScanRoots(benchmark::State& state) {
    for (auto _ : state) {
        auto hits = scan_dependences_roots(6, 2, 500, table());
        benchmark::DoNotOptimize(hits.data());
    }
}
BENCHMARK(BM_ScanRoots);

static void BM_SecondMomentUniform(benchmark::State& state) {
    const long long N = state.range(0);
    for (auto _ : state) {
        auto rep = second_moment_exact_uniform({2, 1, -4}, 0, N, table());
        benchmark::DoNotOptimize(rep.total);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SecondMomentUniform)->Arg(1000)->Arg(10'000)->Arg(100'000)->Complexity();

static void BM_SecondMomentRoots(benchmark::State& state) {
    for (auto _ : state) {
        auto rep = second_moment_exact_roots({1, 1}, 2, 0, state.range(0), table());
        benchmark::DoNotOptimize(rep.total);
    }
}
BENCHMARK(BM_SecondMomentRoots)->Arg(10'000)->Arg(100'000);

static void BM_FourthMoment(benchmark::State& state) {
    const long long N = state.range(0);
    for (auto _ : state) {
        auto rep = fourth_moment_counts(N);
        benchmark::DoNotOptimize(rep.moment);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FourthMoment)->Arg(500)->Arg(2000)->Arg(4000)->Complexity()
    ->Unit(benchmark::kMillisecond);

static void BM_SampleFunction(benchmark::State& state) {
    auto dist = CircleDistribution::uniform_roots(2);
    for (auto _ : state) {
        MultSample s = sample_function(state.range(0), dist, 1729, table());
        benchmark::DoNotOptimize(s.theta.data());
    }
}
BENCHMARK(BM_SampleFunction)->Arg(10'000)->Arg(100'000)->Arg(1'000'000)
    ->Unit(benchmark::kMillisecond);

static void BM_EmpiricalFourier(benchmark::State& state) {
    auto dist = CircleDistribution::uniform_roots(2);
    MultSample s = sample_function(100'001, dist, 1729, table());
    for (auto _ : state) {
        auto f = empirical_fourier(s, 1, {1}, 100'000);
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_EmpiricalFourier);

static void BM_HalaszGrid(benchmark::State& state) {
    auto dist = CircleDistribution::uniform_roots(2);
    MultSample s = sample_function(state.range(0), dist, 1729, table());
    for (auto _ : state) {
        auto rep = halasz_M(s, 5.0);
        benchmark::DoNotOptimize(rep.M);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HalaszGrid)->Arg(10'000)->Arg(100'000)->Complexity()
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
