#include <benchmark/benchmark.h>

#include <cmath>

#include <temper/model.hpp>
#include <temper/oracle.hpp>
#include <temper/search.hpp>
#include <temper/solver.hpp>

namespace {

using namespace temper;

void BM_SolveFiveConstraintSystem(benchmark::State& state) {
    const ConstraintSystem sys{
        {{3, -1, 6}, {5, -3, -7}, {7, -3, -2}, {9, -2, 12}, {11, -2, 15}},
        KeyboardDims{3, 22}};
    for (auto _ : state) {
        const MinimaxSolution sol = solve_system(sys);
        benchmark::DoNotOptimize(sol.deviation);
    }
}
BENCHMARK(BM_SolveFiveConstraintSystem);

void BM_SolvePair(benchmark::State& state) {
    const LinearConstraint c1 = constraint_from_spec({3, 0, 12});
    const LinearConstraint c2 = constraint_from_spec({5, 0, 20});
    for (auto _ : state) {
        const MinimaxSolution sol = solve_pair(c1, c2);
        benchmark::DoNotOptimize(sol.x);
    }
}
BENCHMARK(BM_SolvePair);

void BM_EnumerateFamilies(benchmark::State& state) {
    const KeyboardDims dims{15, 100};
    for (auto _ : state)
        for (int h : kHarmonics)
            benchmark::DoNotOptimize(enumerate_family(h, dims).size());
}
BENCHMARK(BM_EnumerateFamilies);

void BM_BacktrackingSearch(benchmark::State& state) {
    const KeyboardDims dims{static_cast<int>(state.range(0)),
                            static_cast<int>(state.range(1))};
    for (auto _ : state) {
        const SearchResult r = backtracking_search(dims);
        benchmark::DoNotOptimize(r.best->deviation);
    }
    state.SetLabel(std::to_string(dims.rows) + "x" + std::to_string(dims.cols));
}
BENCHMARK(BM_BacktrackingSearch)
    ->Args({3, 22})
    ->Args({7, 40})
    ->Args({4, 98})
    ->Unit(benchmark::kMillisecond);

void BM_OracleObjective(benchmark::State& state) {
    const double r = std::log2(18.0 / 5.0) / 19.0;
    for (auto _ : state) benchmark::DoNotOptimize(objective(r, 22));
}
BENCHMARK(BM_OracleObjective);

void BM_OracleOptimize(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(optimize(static_cast<int>(state.range(0))).deviation);
    state.SetLabel("width " + std::to_string(state.range(0)));
}
BENCHMARK(BM_OracleOptimize)->Arg(22)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
    SweepOptions opt;
    opt.parallelism = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const SweepGrid g = sweep(IntRange{1, 5}, IntRange{12, 30}, opt);
        benchmark::DoNotOptimize(g.cells.size());
    }
    state.SetLabel(std::to_string(state.range(0)) + " thread(s)");
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
