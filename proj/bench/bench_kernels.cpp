#include <benchmark/benchmark.h>

#include "fica/distributions.hpp"
#include "fica/ica.hpp"
#include "fica/kernels.hpp"
#include "fica/pmf.hpp"

namespace {

std::vector<double> simplex(std::uint64_t m) {
    fica::Rng rng(7);
    return fica::sample_uniform_simplex(m, rng);
}

template <fica::Execution E>
void BM_WalshHadamard(benchmark::State& state) {
    const auto base = simplex(std::uint64_t{1} << state.range(0));
    for (auto _ : state) {
        auto data = base;
        fica::walsh_hadamard(data, E);
        benchmark::DoNotOptimize(data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(base.size()));
}
BENCHMARK(BM_WalshHadamard<fica::Execution::serial>)->DenseRange(10, 22, 4);
BENCHMARK(BM_WalshHadamard<fica::Execution::parallel>)->DenseRange(10, 22, 4);

template <fica::Execution E>
void BM_ModularSum(benchmark::State& state) {
    const std::uint32_t q = 3;
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto base = simplex(fica::checked_power(q, d));
    for (auto _ : state) benchmark::DoNotOptimize(fica::modular_sum_transform(base, q, d, E));
}
BENCHMARK(BM_ModularSum<fica::Execution::serial>)->DenseRange(4, 10, 2);
BENCHMARK(BM_ModularSum<fica::Execution::parallel>)->DenseRange(4, 10, 2);

void BM_ModularSumNaive(benchmark::State& state) {
    const std::uint32_t q = 3;
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto base = simplex(fica::checked_power(q, d));
    for (auto _ : state) benchmark::DoNotOptimize(fica::modular_sum_naive(base, q, d));
}
BENCHMARK(BM_ModularSumNaive)->DenseRange(4, 6, 2);

template <fica::Execution E>
void BM_RowDraws(benchmark::State& state) {
    const fica::PrimeField f2(2);
    for (auto _ : state)
        benchmark::DoNotOptimize(fica::row_draw_statistics(static_cast<std::size_t>(state.range(0)), f2, 10000, 1, E));
}
BENCHMARK(BM_RowDraws<fica::Execution::serial>)->Arg(16)->Arg(32);
BENCHMARK(BM_RowDraws<fica::Execution::parallel>)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
