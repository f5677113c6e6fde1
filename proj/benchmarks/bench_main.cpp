#include <benchmark/benchmark.h>

#include <dsiht/adaptive.hpp>
#include <dsiht/oracle.hpp>
#include <dsiht/rng.hpp>
#include <dsiht/simulate.hpp>
#include <dsiht/thresholding.hpp>

using namespace dsiht;

namespace {

Replication table_instance(Index n)
{
    ExperimentScenario sc;
    sc.n = n;
    sc.m = 250;
    sc.d = 20;
    sc.s = 4;
    sc.s0 = 5;
    sc.snr = 5.0;
    sc.base_seed = 900;
    return make_replication(sc, 0);
}

} // namespace

static void BM_DoubleSparseThreshold(benchmark::State& state)
{
    const Index m = state.range(0);
    const auto groups = build_groups(std::vector<Index>(static_cast<std::size_t>(m), 20));
    Rng rng(1);
    Vector v(groups.p());
    for (Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(double_sparse_threshold(v, {1.0, 5}, groups));
    state.SetItemsProcessed(state.iterations() * groups.p());
}
BENCHMARK(BM_DoubleSparseThreshold)->Arg(50)->Arg(250)->Arg(1000);

static void BM_GradientStep(benchmark::State& state)
{
    const auto rep = table_instance(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gradient_step(rep.truth_standardized, rep.data));
}
BENCHMARK(BM_GradientStep)->Arg(500)->Arg(2000);

static void BM_DsihtFit(benchmark::State& state)
{
    const auto rep = table_instance(state.range(0));
    SolverConfig config = SolverConfig::practical();
    config.s0 = 5;
    for (auto _ : state) benchmark::DoNotOptimize(dsiht_fit(rep.data, rep.groups, config));
}
BENCHMARK(BM_DsihtFit)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_AdsihtFit(benchmark::State& state)
{
    const auto rep = table_instance(500);
    for (auto _ : state)
        benchmark::DoNotOptimize(adsiht_fit(rep.data, rep.groups, std::nullopt, SolverConfig::practical()));
}
BENCHMARK(BM_AdsihtFit)->Unit(benchmark::kMillisecond);

static void BM_BestSubsetOracle(benchmark::State& state)
{
    ExperimentScenario sc;
    sc.n = 60;
    sc.m = 5;
    sc.d = 4;
    sc.s = 2;
    sc.s0 = 2;
    sc.snr = 5.0;
    const auto rep = make_replication(sc, 0);
    for (auto _ : state) benchmark::DoNotOptimize(best_subset_oracle(rep.data, rep.groups, {2, 2}));
}
BENCHMARK(BM_BestSubsetOracle)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
