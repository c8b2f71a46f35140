#include <benchmark/benchmark.h>

#include <random>

#include "clark/clark.hpp"

using namespace clark;

namespace {

Point random_point(const Space& space, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> c(space.dim);
    for (auto& x : c) x = unit(rng);
    return Point(space, std::move(c));
}

}  // namespace

static void BM_ModelGradient(benchmark::State& state) {
    const auto m = clark_model(ModelParams{static_cast<std::size_t>(state.range(0))});
    std::mt19937_64 rng(1);
    const Point u = random_point(m->space(), rng);
    for (auto _ : state) benchmark::DoNotOptimize(m->grad(u));
}
BENCHMARK(BM_ModelGradient)->Arg(3)->Arg(8)->Arg(64);

static void BM_Enumerate(benchmark::State& state) {
    const ModelParams mp{static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_critical_set(mp, 21));
}
BENCHMARK(BM_Enumerate)->Arg(3)->Arg(6)->Unit(benchmark::kMicrosecond);

static void BM_FlowSolve(benchmark::State& state) {
    const ModelParams mp{3};
    const auto m = clark_model(mp);
    const auto seeds = draw_seeds(m->space(), model_seed_box(mp), 64, 7);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(gradient_flow_solve(*m, seeds[i++ % seeds.size()], SolveConfig{}));
}
BENCHMARK(BM_FlowSolve)->Unit(benchmark::kMillisecond);

static void BM_Components(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::vector<Point> pts{Point::zero(Space::l2(3))};
    for (int i = 1; i < state.range(0); ++i) pts.push_back(random_point(Space::l2(3), rng));
    const Cloud cloud = make_cloud(pts);
    for (auto _ : state) benchmark::DoNotOptimize(components(cloud, 0.1));
}
BENCHMARK(BM_Components)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_Deformation(benchmark::State& state) {
    SyntheticSpec spec;
    spec.bound_samples = 4000;
    const auto syn = synthetic_two_cluster_setup(spec);
    const auto pts = sample_sublevel(syn.setup, {-1.5, -1.0}, {1.5, 1.0}, 32, 5);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(eta_epsilon_with_retry(syn.setup, pts[i++ % pts.size()]));
}
BENCHMARK(BM_Deformation)->Unit(benchmark::kMillisecond);

static void BM_NodalSolution(benchmark::State& state) {
    const Space g = Space::h01(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(nodal_solution(0.5, 3, g));
}
BENCHMARK(BM_NodalSolution)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
