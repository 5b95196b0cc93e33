#include <benchmark/benchmark.h>

#include "flexpp/engine.hpp"

#include <string>

namespace {

std::string repeat(const std::string& unit, std::size_t times) {
    std::string s;
    s.reserve(unit.size() * times);
    for (std::size_t i = 0; i < times; ++i) s += unit;
    return s;
}

void run(benchmark::State& state, const std::string& input, flexpp::Preset p) {
    for (auto _ : state) {
        flexpp::EngineOptions o;
        o.mode = flexpp::preset(p);
        flexpp::Engine e(std::move(o));
        benchmark::DoNotOptimize(e.process(input));
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * input.size()));
}

} // namespace

static void BM_PlainText(benchmark::State& state) {
    const auto input = repeat("the quick brown fox jumps over the lazy dog.\n",
                              static_cast<std::size_t>(state.range(0)));
    run(state, input, flexpp::Preset::Default);
}
BENCHMARK(BM_PlainText)->Arg(1000)->Arg(10000);

static void BM_CppSource(benchmark::State& state) {
    const auto input =
        "#define SIZE 64\n#define FLAG\n" +
        repeat("/* comment */ int buf[SIZE]; // tail\nconst char *s = \"SIZE\";\n"
               "#ifdef FLAG\nint on = 1;\n#else\nint on = 0;\n#endif\n",
               static_cast<std::size_t>(state.range(0)));
    run(state, input, flexpp::Preset::Cpp);
}
BENCHMARK(BM_CppSource)->Arg(1000)->Arg(10000);

static void BM_MacroCalls(benchmark::State& state) {
    const auto input = "#define pair (#1, #2)\n#define wrap [pair(#1,#2)]\n" +
                       repeat("wrap(a, b) wrap(pair(c,d), e)\n",
                              static_cast<std::size_t>(state.range(0)));
    run(state, input, flexpp::Preset::Default);
}
BENCHMARK(BM_MacroCalls)->Arg(1000)->Arg(10000);

static void BM_DeepRecursion(benchmark::State& state) {
    // A chain of macros each calling the next, `range` levels deep.
    std::string input;
    const auto depth = static_cast<int>(state.range(0));
    for (int i = 0; i < depth; ++i)
        input += "#define m" + std::to_string(i) + " m" + std::to_string(i + 1) + "\n";
    input += "#define m" + std::to_string(depth) + " end\n";
    input += repeat("m0\n", 100);
    run(state, input, flexpp::Preset::Default);
}
BENCHMARK(BM_DeepRecursion)->Arg(10)->Arg(1000);

BENCHMARK_MAIN();
