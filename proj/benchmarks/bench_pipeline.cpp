#include "caarl/armodel.hpp"
#include "caarl/depgraph.hpp"
#include "caarl/identify.hpp"
#include "caarl/narrate.hpp"
#include "caarl/synth.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace caarl;

namespace {

void BM_FitAr(benchmark::State& state) {
    const auto length = static_cast<std::size_t>(state.range(0));
    const auto lag = static_cast<std::size_t>(state.range(1));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise;
    std::vector<double> x(length, 0.0);
    for (std::size_t t = 1; t < length; ++t) x[t] = 0.7 * x[t - 1] + noise(rng);
    for (auto _ : state) benchmark::DoNotOptimize(fit_ar(x, lag));
}
BENCHMARK(BM_FitAr)->Args({100, 2})->Args({200, 4})->Args({1000, 4});

void BM_Track(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto spec = random_spec(n, 3, 2, 8, 100, 0.01, 7);
    const auto gen = generate_set(spec);
    const auto grid = build_grid(gen.set.length(), 100, 100);
    for (auto _ : state) benchmark::DoNotOptimize(track(gen.set, grid, ClusterConfig{}));
}
BENCHMARK(BM_Track)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

AssignmentMatrix random_assignments(std::size_t n, std::size_t m, ModelId k) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<ModelId> pick(0, k - 1);
    AssignmentMatrix a;
    a.entries.assign(n, std::vector<ModelId>(m));
    for (auto& row : a.entries)
        for (auto& v : row) v = pick(rng);
    return a;
}

void BM_BuildGraph(benchmark::State& state) {
    const auto a = random_assignments(static_cast<std::size_t>(state.range(0)), 42, 8);
    for (auto _ : state) benchmark::DoNotOptimize(build_graph(a));
}
BENCHMARK(BM_BuildGraph)->Arg(10)->Arg(100)->Arg(500);

void BM_Serialize(benchmark::State& state) {
    const std::size_t n = 100;
    const auto a = random_assignments(n, 42, 8);
    const auto g = build_graph(a);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("S" + std::to_string(i + 1));
    const std::vector<std::string> ts;
    const auto grid = build_grid(42 * 50, 50, 50);
    const NarrativeContext ctx{ids, ts, grid};
    for (auto _ : state) benchmark::DoNotOptimize(serialize(0, 42, static_cast<std::size_t>(state.range(0)), g, a, ctx));
}
BENCHMARK(BM_Serialize)->Arg(5)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
