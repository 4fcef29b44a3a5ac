// OpenMP kernels against their serial references. Set CW_LO_THREADS to vary workers.

#include <vector>

#include <benchmark/benchmark.h>

#include "cwlo/exact.hpp"
#include "cwlo/oracle.hpp"
#include "cwlo/parallel.hpp"

namespace {

const cwlo::ModelParams kParams(1, 0.7, 0.1);

void BM_LogPartition(benchmark::State& state) {
    const auto n = static_cast<std::int64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwlo::log_partition(kParams, n));
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_LogPartitionSerial(benchmark::State& state) {
    const auto n = static_cast<std::int64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwlo::serial::log_partition(kParams, n));
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_LogOEven(benchmark::State& state) {
    const auto n = static_cast<std::int64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwlo::log_O_even(kParams, n));
    }
}

void BM_LogOEvenSerial(benchmark::State& state) {
    const auto n = static_cast<std::int64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwlo::serial::log_O_even(kParams, n));
    }
}

std::vector<double> weights(int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) {
        v.push_back(i % 2 == 0 ? 1.0 + 0.25 * (i % 4) : -1.5);
    }
    return v;
}

void BM_SpinEnumeration(benchmark::State& state) {
    const std::vector<double> v = weights(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwlo::spin_sum_distribution(kParams, v));
    }
}

void BM_SpinEnumerationSerial(benchmark::State& state) {
    const std::vector<double> v = weights(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwlo::serial::spin_sum_distribution(kParams, v));
    }
}

void BM_AttainmentSearch(benchmark::State& state) {
    const std::vector<double> grid = {1.0, 1.25, 1.5, 2.0};
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cwlo::brute_force_qn(kParams, n, grid));
    }
}

}  // namespace

BENCHMARK(BM_LogPartition)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_LogPartitionSerial)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_LogOEven)->Arg(1 << 20);
BENCHMARK(BM_LogOEvenSerial)->Arg(1 << 20);
BENCHMARK(BM_SpinEnumeration)->Arg(12)->Arg(16);
BENCHMARK(BM_SpinEnumerationSerial)->Arg(12)->Arg(16);
BENCHMARK(BM_AttainmentSearch)->Arg(8)->Arg(10);

int main(int argc, char** argv) {
    cwlo::apply_thread_limit();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) {
        return 1;
    }
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
