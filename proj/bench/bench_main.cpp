// Serial reference vs OpenMP throughput for the replication sweeps and the
// oracle enumeration. Both modes produce bit-identical results (slot-based
// writes, serial aggregation); this target measures the speedup only.

#include <benchmark/benchmark.h>

#include "mvps/harness.hpp"
#include "mvps/oracle.hpp"

namespace {

mvps::UrnModel block_model() {
    mvps::UrnModel m;
    m.theta = 1.0;
    m.space.labels = {"a", "b", "c"};
    m.nu.weights = {0.2, 0.3, 0.5};
    m.kernel.rows = {{0.4, 0.6, 0.0}, {0.4, 0.6, 0.0}, {0.0, 0.0, 1.0}};
    return m;
}

void BM_limit_frequency(benchmark::State& state) {
    const auto mode = state.range(0) ? mvps::ExecMode::Parallel : mvps::ExecMode::Serial;
    const mvps::UrnModel model = block_model();
    for (auto _ : state) {
        auto report = mvps::limit_frequency_experiment(model, 400, 400, 7, mode);
        benchmark::DoNotOptimize(report);
    }
}

void BM_stickbreaking_vs_frequency(benchmark::State& state) {
    const auto mode = state.range(0) ? mvps::ExecMode::Parallel : mvps::ExecMode::Serial;
    const mvps::UrnModel model = block_model();
    for (auto _ : state) {
        auto report =
            mvps::stickbreaking_vs_frequency_test(model, 2000, 200, 400, 7, 1e-8, mode);
        benchmark::DoNotOptimize(report);
    }
}

void BM_singular_structure(benchmark::State& state) {
    const auto mode = state.range(0) ? mvps::ExecMode::Parallel : mvps::ExecMode::Serial;
    for (auto _ : state) {
        auto report = mvps::singular_structure_experiment(1.0, 0.5, 1000, 200, 7, mode);
        benchmark::DoNotOptimize(report);
    }
}

void BM_joint_pmf(benchmark::State& state) {
    const auto mode = state.range(0) ? mvps::ExecMode::Parallel : mvps::ExecMode::Serial;
    const mvps::BasicModel<double> model = mvps::to_basic(block_model());
    for (auto _ : state) {
        auto pmf = mvps::joint_pmf(model, 11, 200000, mode);
        benchmark::DoNotOptimize(pmf);
    }
}

}  // namespace

BENCHMARK(BM_limit_frequency)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stickbreaking_vs_frequency)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_singular_structure)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_joint_pmf)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
