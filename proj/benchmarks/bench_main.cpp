#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ocsmatch/enumeration.hpp"
#include "ocsmatch/instance.hpp"
#include "ocsmatch/lp.hpp"
#include "ocsmatch/ocs.hpp"
#include "ocsmatch/ocs_improved.hpp"
#include "ocsmatch/primal_dual.hpp"

using namespace ocsmatch;

namespace {

StepFunction<double> staircase(int pieces) {
    std::vector<double> breaks, values;
    for (int t = 1; t <= pieces; ++t) {
        breaks.push_back(t);
        values.push_back(1.0 / t);
    }
    return {std::move(breaks), std::move(values), 0.0};
}

void BM_StepTransformBelow(benchmark::State& state) {
    const auto f = staircase(static_cast<int>(state.range(0)));
    const double w = state.range(0) / 2.0 + 0.25;
    for (auto _ : state) {
        auto g = f.transform_below(w, [](double v) { return v + 0.5; });
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_StepTransformBelow)->Arg(4)->Arg(16)->Arg(64);

void BM_StepIntegrate(benchmark::State& state) {
    const auto f = staircase(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(f.integrate());
}
BENCHMARK(BM_StepIntegrate)->Arg(4)->Arg(16)->Arg(64);

void BM_SelectorThroughput(benchmark::State& state) {
    const auto variant = static_cast<OcsVariant>(state.range(0));
    auto session = make_selection_session(variant, 42);
    int round = 0;
    for (auto _ : state) {
        const CandidatePair pair{round, round % 7, 7 + round % 5};
        benchmark::DoNotOptimize(session->select(pair));
        ++round;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SelectorThroughput)
    ->Arg(static_cast<int>(OcsVariant::independent))
    ->Arg(static_cast<int>(OcsVariant::original))
    ->Arg(static_cast<int>(OcsVariant::improved));

void BM_MatcherTriangular(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto inst = gen_upper_triangular(n, 0);
    const auto sol = solve_lp(build_lp(1.0 / 16.0, 1.5, 7));
    std::vector<std::vector<double>> rows;
    for (int j = 0; j < n; ++j) rows.push_back(inst.dense_row(static_cast<std::size_t>(j)));
    for (auto _ : state) {
        Matcher m(n, sol.params, OcsVariant::original, 11);
        for (const auto& row : rows) m.arrive(row);
        benchmark::DoNotOptimize(m.dual_objective());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_MatcherTriangular)->Arg(8)->Arg(16)->Arg(32);

void BM_SolveRatioLp(benchmark::State& state) {
    const double gamma = state.range(0) == 0 ? 1.0 / 16.0 : 1.0 / (3.0 * std::sqrt(3.0));
    for (auto _ : state) {
        auto sol = solve_lp(build_lp(gamma, 1.5, 7));
        benchmark::DoNotOptimize(sol.params.Gamma);
    }
}
BENCHMARK(BM_SolveRatioLp)->Arg(0)->Arg(1);

void BM_OfflineOpt(benchmark::State& state) {
    const auto inst = gen_random(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(offline_opt(inst));
}
BENCHMARK(BM_OfflineOpt)->Arg(8)->Arg(32);

void BM_EnumerateOriginal(benchmark::State& state) {
    std::vector<CandidatePair> rounds;
    for (int t = 0; t < state.range(0); ++t) rounds.push_back({t, t % 3, (t + 1) % 3});
    for (auto _ : state) {
        auto e = enumerate_original_ocs(rounds);
        benchmark::DoNotOptimize(e.path_total);
    }
}
BENCHMARK(BM_EnumerateOriginal)->Arg(5)->Arg(8);

void BM_EnumerateImproved(benchmark::State& state) {
    std::vector<CandidatePair> rounds;
    for (int t = 0; t < state.range(0); ++t) rounds.push_back({t, t % 3, (t + 1) % 3});
    const double p = optimal_sender_probability().p;
    for (auto _ : state) {
        auto e = enumerate_improved_ocs(rounds, p);
        benchmark::DoNotOptimize(e.path_total);
    }
}
BENCHMARK(BM_EnumerateImproved)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
