#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "expo_surf/bodies.hpp"
#include "expo_surf/bounds.hpp"
#include "expo_surf/measure.hpp"
#include "expo_surf/random.hpp"
#include "expo_surf/random_polytope.hpp"
#include "expo_surf/special_functions.hpp"
#include "expo_surf/surface_area.hpp"

using namespace expo_surf;

static void BM_QuadratureLogJ(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quadrature_log([a](double t) { return a * std::log(t) - 0.5 * t * t; }, 0.0, 20.0 + std::sqrt(a) * 4.0));
  }
}
BENCHMARK(BM_QuadratureLogJ)->Arg(10)->Arg(1000);

static void BM_HyperplaneSurface(benchmark::State& state) {
  const MeasureParams m(static_cast<std::size_t>(state.range(0)), 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(hyperplane_surface(m, 1.0).value);
}
BENCHMARK(BM_HyperplaneSurface)->Arg(8)->Arg(200);

static void BM_SamplePoint(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const MeasureParams m(n, 1.0);
  RandomStream rng(1);
  std::vector<double> x(n);
  for (auto _ : state) {
    sample_point(m, rng, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SamplePoint)->Arg(2)->Arg(16)->Arg(100);

static void BM_ShellCube(benchmark::State& state) {
  const MeasureParams m(8, 2.0);
  ShellOptions opt;
  opt.epsilon = default_shell_width(m);
  for (auto _ : state) {
    RandomStream rng(2);
    benchmark::DoNotOptimize(shell_estimate(m, ConvexBody::cube(8, 1.0), 100'000, rng, opt).value);
  }
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_ShellCube)->Unit(benchmark::kMillisecond);

static void BM_FacetRandomPolytope(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const MeasureParams m(n, 2.0);
  const auto pp = paper_parameters(m);
  RandomStream body_rng(3);
  const ConvexBody body = construct(m, pp.N, pp.rho, body_rng);
  for (auto _ : state) {
    RandomStream rng(4);
    benchmark::DoNotOptimize(facet_estimate(m, body, 4000, rng).value);
  }
}
BENCHMARK(BM_FacetRandomPolytope)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ExpectedSurface(benchmark::State& state) {
  const MeasureParams m(16, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(expected_random_polytope_surface(m, 11, 2.0));
}
BENCHMARK(BM_ExpectedSurface)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
