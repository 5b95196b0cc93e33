#include <benchmark/benchmark.h>

#include "flexpp/eval.hpp"

namespace {
bool none(std::string_view) { return false; }
} // namespace

static void BM_EvalArithmetic(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(flexpp::evaluate("(2+3)*4 - 10/3 % 2 == 19 && !0", none));
}
BENCHMARK(BM_EvalArithmetic);

static void BM_EvalText(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(
            flexpp::evaluate("length('hello world') > 5 && name ~= n*e || x == y", none));
}
BENCHMARK(BM_EvalText);

static void BM_ParseOnly(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(flexpp::parse_expr("((1+2)*(3+4))/(5-6) >= -7 || defined(z)"));
}
BENCHMARK(BM_ParseOnly);

BENCHMARK_MAIN();
