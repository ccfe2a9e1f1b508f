#include <benchmark/benchmark.h>

#include <cmath>

#include "sphqmc/fooling.hpp"
#include "sphqmc/geom.hpp"
#include "sphqmc/kernel.hpp"
#include "sphqmc/pointset.hpp"
#include "sphqmc/wce.hpp"
#include "sphqmc/zonal.hpp"

using namespace sphqmc;

static void BM_GenerateFibonacci(benchmark::State& state) {
  const auto spec = GeneratorSpec::fibonacci_s2(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate(spec));
}
BENCHMARK(BM_GenerateFibonacci)->Range(256, 65536);

static void BM_CoveringS2(benchmark::State& state) {
  const PointSet ps = generate(GeneratorSpec::random_uniform(state.range(0), 7));
  for (auto _ : state) benchmark::DoNotOptimize(covering_radius(ps).radius);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CoveringS2)->RangeMultiplier(4)->Range(64, 4096)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_CircleKernel(benchmark::State& state) {
  const auto k = make_zonal_kernel(1.5, 1);
  double phi = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k->at_angle(phi));
    phi = std::fmod(phi + 0.37, 3.14);
  }
}
BENCHMARK(BM_CircleKernel);

static void BM_SphereKernel(benchmark::State& state) {
  const auto k = make_zonal_kernel(3.0, 2);
  double theta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k->at_angle(theta));
    theta = std::fmod(theta + 0.37, 3.14);
  }
}
BENCHMARK(BM_SphereKernel);

static void BM_WceP2Circle(benchmark::State& state) {
  const PointSet ps = generate(GeneratorSpec::circle_removed(state.range(0), 1));
  for (auto _ : state) benchmark::DoNotOptimize(wce_p2(ps, 1.5).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WceP2Circle)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);

static void BM_WceP2Sphere(benchmark::State& state) {
  const PointSet ps = generate(GeneratorSpec::fibonacci_s2(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wce_p2(ps, 3.0).value);
}
BENCHMARK(BM_WceP2Sphere)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

static void BM_WceL1Circle(benchmark::State& state) {
  const PointSet ps = generate(GeneratorSpec::equal_spaced_circle(state.range(0)));
  const auto prm = SobolevParams::make(1, kInf, 1.25);
  for (auto _ : state) benchmark::DoNotOptimize(wce_lq(ps, prm).value);
}
BENCHMARK(BM_WceL1Circle)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

static void BM_CollarNorm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(collar_sobolev_norm_even(2, 2.0, 4, 0.05));
}
BENCHMARK(BM_CollarNorm)->Unit(benchmark::kMicrosecond);

static void BM_Certificate(benchmark::State& state) {
  const PointSet ps = generate(GeneratorSpec::fibonacci_s2(state.range(0)));
  const auto prm = SobolevParams::make(2, 2.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(collar_certificate(ps, prm).value);
}
BENCHMARK(BM_Certificate)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
