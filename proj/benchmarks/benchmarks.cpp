#include <benchmark/benchmark.h>

#include "cutloc/distance.hpp"
#include "cutloc/obstacle.hpp"
#include "cutloc/surfaces.hpp"

namespace {

void BM_BuildOperators(benchmark::State& state) {
  auto mesh = cutloc::flat_torus_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto ops = cutloc::build_operators(mesh);
    benchmark::DoNotOptimize(ops.total_area);
  }
}
BENCHMARK(BM_BuildOperators)->Arg(64)->Arg(128);

void BM_FastMarch(benchmark::State& state) {
  auto mesh = cutloc::flat_torus_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto d = cutloc::fast_march(mesh, {0});
    benchmark::DoNotOptimize(d.values.sum());
  }
}
BENCHMARK(BM_FastMarch)->Arg(64)->Arg(128);

void BM_ObstacleSolve(benchmark::State& state) {
  auto mesh = cutloc::flat_torus_grid(static_cast<int>(state.range(0)));
  mesh.set_basepoint(0);
  auto ops = cutloc::build_operators(mesh);
  auto d = cutloc::fast_march(mesh, {0});
  for (auto _ : state) {
    cutloc::ObstacleProblem p;
    p.mesh = &mesh;
    p.ops = &ops;
    p.obstacle = d.values;
    p.m = 64.0;
    p.lower_bound_zero = true;
    auto rep = cutloc::solve_obstacle(p);
    benchmark::DoNotOptimize(rep.energy);
  }
}
BENCHMARK(BM_ObstacleSolve)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
