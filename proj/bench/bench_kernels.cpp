#include <benchmark/benchmark.h>

#include <vector>

#include "evosig/kernels.hpp"

using namespace evosig;

namespace {

std::vector<Genome> genomes(std::size_t n) {
    std::vector<Genome> out;
    Rng rng(1);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(random_genome(Encoding::Supg, rng));
    return out;
}

std::vector<BehaviorVector> behaviors(std::size_t n) {
    std::vector<BehaviorVector> out;
    Rng rng(2);
    for (std::size_t i = 0; i < n; ++i) {
        BehaviorVector b(334 * kLegs);
        for (std::size_t k = 0; k < b.size(); ++k)
            b.set(k, bernoulli(rng, 0.5));
        out.push_back(b);
    }
    return out;
}

void samples(std::size_t n, std::vector<double>& xs, std::vector<double>& ys) {
    Rng rng(3);
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < n; ++i) {
        xs.push_back(uniform01(rng));
        ys.push_back(gaussian(rng, 0.8) - 1.0);
    }
}

void BM_EvaluateBatch(benchmark::State& state) {
    const auto g = genomes(static_cast<std::size_t>(state.range(0)));
    SimulationOptions opt;
    opt.record_trajectory = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_batch(g, HexapodConfig{}, opt));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluateBatchSerial(benchmark::State& state) {
    const auto g = genomes(static_cast<std::size_t>(state.range(0)));
    SimulationOptions opt;
    opt.record_trajectory = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::evaluate_batch(g, HexapodConfig{}, opt));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MeanHamming(benchmark::State& state) {
    const auto b = behaviors(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(mean_hamming(b));
}

void BM_MeanHammingSerial(benchmark::State& state) {
    const auto b = behaviors(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::mean_hamming(b));
}

void BM_KdeGrid(benchmark::State& state) {
    std::vector<double> xs, ys;
    samples(static_cast<std::size_t>(state.range(0)), xs, ys);
    for (auto _ : state)
        benchmark::DoNotOptimize(kde_grid(xs, ys, Window{0, 1, -3, 1}));
}

void BM_KdeGridSerial(benchmark::State& state) {
    std::vector<double> xs, ys;
    samples(static_cast<std::size_t>(state.range(0)), xs, ys);
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::kde_grid(xs, ys, Window{0, 1, -3, 1}));
}

} // namespace

BENCHMARK(BM_EvaluateBatch)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateBatchSerial)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MeanHamming)->Arg(64)->Arg(200)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_MeanHammingSerial)->Arg(64)->Arg(200)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_KdeGrid)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KdeGridSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
