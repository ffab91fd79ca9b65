#include <benchmark/benchmark.h>

#include <random>

#include "hml/regnorm.hpp"

using namespace hml;

namespace {

ScalarTemplate grid_of(int n) {
    ScalarTemplate t;
    t.n = n;
    return t;
}

void BM_Partitions(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_cyclic_partitions(K, 8));
}
BENCHMARK(BM_Partitions)->DenseRange(2, 5);

void BM_ScalarResidual(benchmark::State& state) {
    const ScalarProblem p = build_problem(ScalarKind::Small, 1.0, 8.0, static_cast<int>(state.range(0)), 0.15, 1e-8);
    const ScalarState s = default_initial_state(p);
    for (auto _ : state) benchmark::DoNotOptimize(residual(p, s));
}
BENCHMARK(BM_ScalarResidual)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_SolveSmall(benchmark::State& state) {
    const ScalarTemplate t = grid_of(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_small(1.0, t));
}
BENCHMARK(BM_SolveSmall)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_MuSmall(benchmark::State& state) {
    const ScalarSolution s = solve_small(1.0, grid_of(257));
    for (auto _ : state) benchmark::DoNotOptimize(mu_small(s));
}
BENCHMARK(BM_MuSmall)->Unit(benchmark::kMillisecond);

void BM_HitchinResidual(benchmark::State& state) {
    const MatrixProblem p = build_matrix_problem(0.5, 1.0, 8.0, static_cast<int>(state.range(0)), 1e-8);
    const MetricField h = far_field_model(p);
    for (auto _ : state) benchmark::DoNotOptimize(hitchin_residual(h, p));
}
BENCHMARK(BM_HitchinResidual)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_FlowSolve(benchmark::State& state) {
    const MatrixProblem p = build_matrix_problem(0.5, 1.0, 8.0, 65, 1e-8);
    for (auto _ : state) benchmark::DoNotOptimize(flow_solve(p));
}
BENCHMARK(BM_FlowSolve)->Unit(benchmark::kMillisecond);

void BM_TraceDensity(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> d;
    const Complex u(d(rng), d(rng)), z(d(rng), d(rng));
    const Mat2 phi = higgs_eval(HiggsFieldSpec::small(u), z);
    const Mat2 h = small_metric(u, 0.3, z);
    for (auto _ : state) benchmark::DoNotOptimize(trace_density(phi, h));
}
BENCHMARK(BM_TraceDensity);

}  // namespace
BENCHMARK_MAIN();
