#include <benchmark/benchmark.h>

#include <qlevy/classical.hpp>
#include <qlevy/evolution.hpp>
#include <qlevy/observables.hpp>
#include <qlevy/spectral.hpp>
#include <qlevy/weierstrass.hpp>

#include <numbers>

using namespace qlevy;

namespace {

EvolutionKernel wannier_kernel(double A, int b, int nodes)
{
    ResolutionRequest req;
    req.fixed_nodes = nodes;
    return EvolutionKernel::build(WalkParams(A, b), KernelRates::dimensionless(1.0, 0.5), PureWannier{0}, req);
}

} // namespace

static void BM_LacunarySums(benchmark::State& state)
{
    const WalkParams p(2.0, static_cast<int>(state.range(0)));
    const auto budget = SeriesBudget::automatic(p, 1e-12);
    double k = 0.1;
    for (auto _ : state) {
        const auto cs = lacunary_cs(k, p, budget);
        benchmark::DoNotOptimize(cs);
        k += 1e-3;
        if (k > std::numbers::pi) k -= 2 * std::numbers::pi;
    }
    state.counters["terms"] = budget.n_terms;
}
BENCHMARK(BM_LacunarySums)->Arg(1)->Arg(4)->Arg(8);

static void BM_KernelBuild(benchmark::State& state)
{
    for (auto _ : state) {
        auto k = wannier_kernel(3.0, 2, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(k.size());
    }
}
BENCHMARK(BM_KernelBuild)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_Purity(benchmark::State& state)
{
    const auto k = wannier_kernel(3.0, 2, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(purity(k, 2.0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Purity)->RangeMultiplier(2)->Range(256, 2048)->Complexity(benchmark::oNSquared)->Unit(benchmark::kMillisecond);

static void BM_SiteProfile(benchmark::State& state)
{
    const auto k = wannier_kernel(3.0, 2, 1024);
    const auto sites = window_sites(k, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(site_profile(k, sites, 2.0));
    state.counters["sites"] = static_cast<double>(sites.size());
}
BENCHMARK(BM_SiteProfile)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_DosEstimate(benchmark::State& state)
{
    const WalkParams p(3.0, 2);
    const auto budget = SeriesBudget::automatic(p, 1e-10);
    for (auto _ : state) benchmark::DoNotOptimize(dos_estimate(p, budget, state.range(0), 100, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DosEstimate)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_ClassicalProbability(benchmark::State& state)
{
    const ClassicalWalk walk(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(classical_localized_probability(static_cast<double>(state.range(0)), walk));
}
BENCHMARK(BM_ClassicalProbability)->Arg(1)->Arg(100);
BENCHMARK_MAIN();
