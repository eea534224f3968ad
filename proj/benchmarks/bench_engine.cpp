// Throughput of the simulation core: single replications of the shipped
// configurations and whole experiments with aggregation.
#include <benchmark/benchmark.h>

#include "hybridsim/cases/heated_room.hpp"
#include "hybridsim/engine/simulator.hpp"
#include "hybridsim/mc/experiment.hpp"

using namespace hybridsim;

namespace {

void BM_ReplicationCase0(benchmark::State& state) {
    const auto model = cases::build_heated_room(cases::catalog_entry("case0").config);
    engine::EngineConfig config;
    config.horizon = static_cast<double>(state.range(0));
    config.step_size = 0.1;
    config.sample_grid = 0.0;
    std::uint64_t replication = 0;
    for (auto _ : state) {
        auto trace = engine::run_replication(model, config, replication++);
        benchmark::DoNotOptimize(trace.end_time);
    }
    state.SetItemsProcessed(state.iterations()
                            * static_cast<long long>(config.horizon / config.step_size));
}
BENCHMARK(BM_ReplicationCase0)->Arg(100)->Arg(1000);

void BM_ReplicationCase2(benchmark::State& state) {
    const auto model = cases::build_heated_room(cases::catalog_entry("case2").config);
    engine::EngineConfig config;
    config.horizon = static_cast<double>(state.range(0));
    config.step_size = 0.1;
    config.sample_grid = 0.0;
    std::uint64_t replication = 0;
    for (auto _ : state) {
        auto trace = engine::run_replication(model, config, replication++);
        benchmark::DoNotOptimize(trace.firings.size());
    }
}
BENCHMARK(BM_ReplicationCase2)->Arg(100)->Arg(1000);

void BM_ReplicationWithSampling(benchmark::State& state) {
    const auto model = cases::build_heated_room(cases::catalog_entry("case1").config);
    engine::EngineConfig config;
    config.horizon = 300.0;
    config.step_size = 0.1;
    config.sample_grid = 0.5;
    std::uint64_t replication = 0;
    for (auto _ : state) {
        auto trace = engine::run_replication(model, config, replication++);
        benchmark::DoNotOptimize(trace.samples.size());
    }
}
BENCHMARK(BM_ReplicationWithSampling);

void BM_Experiment(benchmark::State& state) {
    const auto model = cases::build_heated_room(cases::catalog_entry("case0").config);
    mc::ExperimentSpec spec;
    spec.engine.horizon = 200.0;
    spec.engine.step_size = 0.5;
    spec.engine.sample_grid = 0.0;
    spec.replications = static_cast<int>(state.range(0));
    spec.statistics.push_back({mc::StatisticRequest::Kind::StateFractions, "", ""});
    for (auto _ : state) {
        auto result = mc::run_experiment(model, spec);
        benchmark::DoNotOptimize(result.statistics.size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Experiment)->Arg(20)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
