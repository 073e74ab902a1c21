// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "gqa/parallel.hpp"
#include "gqa/quadstate.hpp"

namespace {

gqa::Matrix random_matrix(std::size_t n, std::uint64_t seed)
{
    gqa::Rng rng(seed);
    gqa::Matrix m(n, n);
    for (double& x : m.data()) {
        x = rng.normal();
    }
    return m;
}

template <bool Parallel>
void bm_matmul(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const gqa::Matrix a = random_matrix(n, 1);
    const gqa::Matrix b = random_matrix(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? gqa::matmul(a, b) : gqa::serial::matmul(a, b));
    }
}

// Evaluating a 3-wire state on a 41^3 grid, as the oracle does.
template <bool Parallel>
void bm_grid(benchmark::State& state)
{
    const gqa::QuadState s = gqa::gaussian_state({0.5, -1.0, 2.0}, gqa::Matrix{{2, 1, 0}, {1, 2, 0}, {0, 0, 1}});
    const gqa::StateEvaluator eval(s);
    const gqa::PointFunction f = [&](std::span<const double> x) { return eval(x); };
    const gqa::Grid grid{{-5, -5, -5}, {5, 5, 5}, static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? gqa::grid_evaluate(f, grid) : gqa::serial::grid_evaluate(f, grid));
    }
}

template <bool Parallel>
void bm_moments(benchmark::State& state)
{
    const gqa::Sampler draw = [](gqa::Rng& rng) { return gqa::Vector{rng.normal(), rng.normal(), rng.normal()}; };
    const auto samples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? gqa::moment_sums(draw, 3, samples, 7)
                                          : gqa::serial::moment_sums(draw, 3, samples, 7));
    }
}

} // namespace

BENCHMARK(bm_matmul<false>)->Arg(64)->Arg(256);
BENCHMARK(bm_matmul<true>)->Arg(64)->Arg(256);
BENCHMARK(bm_grid<false>)->Arg(21)->Arg(41);
BENCHMARK(bm_grid<true>)->Arg(21)->Arg(41);
BENCHMARK(bm_moments<false>)->Arg(100000);
BENCHMARK(bm_moments<true>)->Arg(100000);

BENCHMARK_MAIN();
