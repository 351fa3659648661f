#include "cocycle/dominated.hpp"
#include "cocycle/extension.hpp"
#include "cocycle/path.hpp"
#include "cocycle/sewing.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace cocycle;

namespace {

PathPtr random_walk(Kind kind, int d, int n, std::size_t N, unsigned seed = 7)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0, 1.0 / std::sqrt(static_cast<double>(N)));
    std::vector<double> times(N);
    std::vector<std::vector<double>> pts(N, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < N; ++i) {
        times[i] = static_cast<double>(i) / static_cast<double>(N - 1);
        if (i > 0)
            for (int k = 0; k < d; ++k)
                pts[i][k] = pts[i - 1][k] + step(rng);
    }
    return std::make_shared<const SampledGroupPath>(signature_piecewise_linear(kind, n, times, pts));
}

void BM_Product(benchmark::State& state)
{
    auto sys = HopfSystem::get(Kind::nilpotent, 3, static_cast<int>(state.range(0)));
    std::mt19937_64 rng(1);
    GradedTensor a = random_grouplike(sys, rng), b = random_grouplike(sys, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(mul(a, b));
}
BENCHMARK(BM_Product)->DenseRange(2, 4);

void BM_ButcherProduct(benchmark::State& state)
{
    auto sys = HopfSystem::get(Kind::butcher, 2, static_cast<int>(state.range(0)));
    std::mt19937_64 rng(1);
    GradedTensor a = random_grouplike(sys, rng), b = random_grouplike(sys, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(mul(a, b));
}
BENCHMARK(BM_ButcherProduct)->DenseRange(2, 4);

void BM_Signature(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(random_walk(Kind::nilpotent, 2, 4, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Signature)->Arg(256)->Arg(1024);

void BM_PVariation(benchmark::State& state)
{
    auto g = random_walk(Kind::nilpotent, 2, 2, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(p_variation(*g, 2.5));
}
BENCHMARK(BM_PVariation)->Arg(256)->Arg(1024);

void BM_Extend(benchmark::State& state)
{
    auto g = random_walk(Kind::nilpotent, 2, 2, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(extend_to_level(g, 4, 2.5, Schedule::dyadic));
}
BENCHMARK(BM_Extend)->Arg(256)->Arg(1024);

void BM_IteratedIntegral(benchmark::State& state)
{
    auto g = random_walk(Kind::nilpotent, 2, 2, static_cast<std::size_t>(state.range(0)));
    DominatedPath d = dominate(increment_form(g), 1.2);
    for (auto _ : state)
        benchmark::DoNotOptimize(iterated_integral(d, d));
}
BENCHMARK(BM_IteratedIntegral)->Arg(256)->Arg(1024);

} // namespace

BENCHMARK_MAIN();
