#include <benchmark/benchmark.h>

#include "prsplit/functions.hpp"
#include "prsplit/problems.hpp"
#include "prsplit/splitting.hpp"

using namespace prsplit;

static void BM_ProjectSparseBox(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Vector w = Rng(1).gaussian_vector(n);
    const SparseBoxSet d{n / 10, 1e6};
    for (auto _ : state) benchmark::DoNotOptimize(project_sparse_box(d, w));
}
BENCHMARK(BM_ProjectSparseBox)->Arg(1000)->Arg(4000);

static void BM_ProjectAffine(benchmark::State& state) {
    const auto inst = gen_feasibility(static_cast<std::size_t>(state.range(0)),
                                      static_cast<std::size_t>(state.range(1)), 2);
    const Vector w = Rng(3).gaussian_vector(inst.n());
    for (auto _ : state) benchmark::DoNotOptimize(project_affine(*inst.c, w));
}
BENCHMARK(BM_ProjectAffine)->Args({100, 1000})->Args({500, 4000});

static void BM_PrStepFeasibility(benchmark::State& state) {
    const auto inst = gen_feasibility(static_cast<std::size_t>(state.range(0)),
                                      static_cast<std::size_t>(state.range(1)), 4);
    const SplitProblem p = build_feasibility_pr(inst);
    IterateState s = IterateState::initial(Rng(5).gaussian_vector(inst.n()));
    for (auto _ : state) s = pr_step(s, p, 0.08);
    benchmark::DoNotOptimize(s.x.data());
}
BENCHMARK(BM_PrStepFeasibility)->Args({100, 1000})->Args({500, 4000});

static void BM_ShiftedQuadraticSolve(benchmark::State& state) {
    Rng rng(6);
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto n = static_cast<std::size_t>(state.range(1));
    auto a = std::make_shared<const DenseMatrix>(rng.gaussian_matrix(m, n));
    const ShiftedQuadraticSolver solver(a, rng.gaussian_vector(m), 1.0, 0.05);
    const Vector w = rng.gaussian_vector(n);
    for (auto _ : state) benchmark::DoNotOptimize(solver(w));
    state.SetLabel(solver.uses_woodbury() ? "woodbury" : "direct");
}
BENCHMARK(BM_ShiftedQuadraticSolve)->Args({50, 500})->Args({400, 500});

static void BM_SolveFeasibilityPr(benchmark::State& state) {
    const auto inst = gen_feasibility(100, 1000, 7);
    const SplitProblem p = build_feasibility_pr(inst);
    SolverConfig cfg;
    cfg.gamma0 = 0.95 / 5.0;
    cfg.heuristic = HeuristicConfig{};
    for (auto _ : state) benchmark::DoNotOptimize(run(p, cfg, Vector::Zero(1000)).iterations);
}
BENCHMARK(BM_SolveFeasibilityPr)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
