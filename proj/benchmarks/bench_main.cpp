#include "hyperrate/analysis.hpp"
#include "hyperrate/hubplan.hpp"
#include "hyperrate/labelings.hpp"
#include "hyperrate/rng.hpp"
#include "hyperrate/simulate.hpp"
#include "hyperrate/varsolve.hpp"

#include <benchmark/benchmark.h>

using namespace hyperrate;

namespace {

WeightedHypergraph random_weights(int n, int r)
{
    WeightedHypergraph w(n, r, 0.3, 0.0);
    RandomStream rng(1, 0);
    for (std::size_t i = 0; i < w.size(); ++i)
        w.set_weight(i, rng.uniform());
    return w;
}

void BM_DensityTriangle(benchmark::State& state)
{
    auto w = random_weights(static_cast<int>(state.range(0)), 2);
    auto h = instances::clique(3, 2);
    EvalOptions opts;
    opts.threads = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(density(h, w, opts));
}
BENCHMARK(BM_DensityTriangle)->Arg(20)->Arg(40)->Arg(80);

void BM_GradientOctahedron(benchmark::State& state)
{
    auto w = random_weights(static_cast<int>(state.range(0)), 3);
    auto h = instances::alternating_octahedron();
    EvalOptions opts;
    opts.threads = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(density_gradient(h, w, opts));
}
BENCHMARK(BM_GradientOctahedron)->Arg(8)->Arg(12);

void BM_StableLabelings(benchmark::State& state)
{
    auto h = state.range(0) == 0 ? instances::alternating_octahedron() : instances::clique(5, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_stable_labelings(h));
}
BENCHMARK(BM_StableLabelings)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RhoSpecial(benchmark::State& state)
{
    RateProblem problem(instances::alternating_octahedron());
    for (auto _ : state)
        benchmark::DoNotOptimize(problem.solve(5.0));
}
BENCHMARK(BM_RhoSpecial)->Unit(benchmark::kMillisecond);

void BM_CutNormExact(benchmark::State& state)
{
    auto f = SymmetricTensor::gaussian(static_cast<int>(state.range(0)), 3, 1, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(cut_norm_exact(f));
}
BENCHMARK(BM_CutNormExact)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_CutNormHeuristic(benchmark::State& state)
{
    auto f = SymmetricTensor::gaussian(static_cast<int>(state.range(0)), 3, 1, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(cut_norm_heuristic(f, 20, 1));
}
BENCHMARK(BM_CutNormHeuristic)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_CountCopies(benchmark::State& state)
{
    auto g = sample_gnp(static_cast<int>(state.range(0)), 3, 0.5, 1);
    auto h = instances::alternating_octahedron();
    for (auto _ : state)
        benchmark::DoNotOptimize(count_copies(h, g));
}
BENCHMARK(BM_CountCopies)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
