#include <benchmark/benchmark.h>

#include "flexpp/glob.hpp"

static void BM_GlobCompile(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(flexpp::GlobPattern("src/[a-z]*_test.c?"));
}
BENCHMARK(BM_GlobCompile);

static void BM_GlobMatch(benchmark::State& state) {
    flexpp::GlobPattern g("src/[a-z]*_test.c?");
    for (auto _ : state)
        benchmark::DoNotOptimize(g.matches("src/scanner_engine_test.cc"));
}
BENCHMARK(BM_GlobMatch);

static void BM_GlobManyStars(benchmark::State& state) {
    // Worst case for star backtracking: no match after many partial ones.
    const std::string subject(static_cast<std::size_t>(state.range(0)), 'a');
    flexpp::GlobPattern g("*a*a*a*a*b");
    for (auto _ : state)
        benchmark::DoNotOptimize(g.matches(subject));
}
BENCHMARK(BM_GlobManyStars)->Arg(64)->Arg(1024);

BENCHMARK_MAIN();
