#include <benchmark/benchmark.h>

#include "mcms/refine.hpp"
#include "mcms/scheme.hpp"

using namespace mcms;

static void BM_TransitionWindows(benchmark::State& state) {
  const SchemeSpec spec = penrose_scheme();
  for (auto _ : state) benchmark::DoNotOptimize(transition_windows(spec));
}
BENCHMARK(BM_TransitionWindows);

static void BM_Erode(benchmark::State& state) {
  const Region p = regular_pentagon();
  const Region k = scaled(p, -0.618);
  for (auto _ : state) benchmark::DoNotOptimize(erode(p, k));
}
BENCHMARK(BM_Erode);

static void BM_GeneratePoints(benchmark::State& state) {
  const SchemeSpec spec = penrose_scheme();
  const double s = static_cast<double>(state.range(0));
  std::size_t n = 0;
  for (auto _ : state) {
    const auto pts = generate_all_points(spec, s);
    for (const auto& c : pts) n += c.size();
  }
  state.counters["points"] = benchmark::Counter(static_cast<double>(n), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_GeneratePoints)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_RefinementStep(benchmark::State& state) {
  const SchemeSpec spec = penrose_scheme();
  const Eigen::MatrixXd nu = build_nu(spec, transition_windows(spec), AreaMarkov{});
  const RefinementProblem problem = refinement_problem(spec);
  const GridSpec grid = common_grid(problem, 1.0 / static_cast<double>(state.range(0)));
  const RefinementKernel kernel = RefinementKernel::build(problem, nu, grid);
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(4, 0.25);
  DensityGrid f = initial_density(problem, grid, w);
  for (auto _ : state) {
    f = apply_refinement(f, kernel, nu);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_RefinementStep)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
