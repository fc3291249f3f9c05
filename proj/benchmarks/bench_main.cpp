#include <benchmark/benchmark.h>

#include <vector>

#include "riskavi/engine.hpp"
#include "riskavi/risk.hpp"

namespace {

std::vector<double> make_samples(std::size_t m) {
    riskavi::Rng rng(riskavi::stream_key({42, m}));
    std::vector<double> v(m);
    for (double& x : v) x = rng.uniform(0.0, 300.0);
    return v;
}

void BM_CvarEmpirical(benchmark::State& state) {
    const auto samples = make_samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(riskavi::cvar_empirical(samples, 0.5));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CvarEmpirical)->Arg(1000)->Arg(100000)->Arg(1000000);

void BM_MeanSemideviationEmpirical(benchmark::State& state) {
    const auto samples = make_samples(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(riskavi::mean_semideviation_empirical(samples, 0.5, 2.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MeanSemideviationEmpirical)->Arg(1000)->Arg(100000)->Arg(1000000);

void BM_BellmanTarget(benchmark::State& state) {
    const riskavi::MaintenanceModel model{riskavi::MaintParams{}};
    const riskavi::RiskSpec risk = riskavi::RiskSpec::cvar(0.5);
    const riskavi::ValueFn j = riskavi::ValueFn::zero(model.state_max(), model.j_max());
    const riskavi::State s{10.0, false};
    const int m = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(riskavi::bellman_target(model, risk, j, s, m, seed++));
    state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_BellmanTarget)->Arg(100)->Arg(10000);

void BM_AviIteration(benchmark::State& state) {
    const riskavi::MaintenanceModel model{riskavi::MaintParams{}};
    riskavi::AviConfig config;
    config.risk = riskavi::RiskSpec::cvar(0.3);
    config.n = 100;
    config.m = 100;
    config.seed = 7;
    const riskavi::ValueFn j = riskavi::ValueFn::zero(model.state_max(), model.j_max());
    int k = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(riskavi::avi_iterate(model, config, j, k++));
}
BENCHMARK(BM_AviIteration);

}  // namespace

BENCHMARK_MAIN();
