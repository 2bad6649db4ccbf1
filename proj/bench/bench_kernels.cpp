// Parallel transforms against the serial direct-summation reference.

#include <benchmark/benchmark.h>

#include <random>

#include "hawking/graph_surface.hpp"
#include "hawking/sphere_spectral.hpp"

using namespace hawking;

namespace {

HarmonicField field(int lmax) {
  std::mt19937 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  HarmonicField f(lmax);
  for (auto& c : f.coeffs()) c = n(rng);
  return f;
}

void BM_synthesize(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto g = sphere_grid(L);
  const auto f = field(L);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(*g, f));
}

void BM_synthesize_reference(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto g = sphere_grid(L);
  const auto f = field(L);
  for (auto _ : state) benchmark::DoNotOptimize(reference::synthesize(*g, f));
}

void BM_analyze(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto g = sphere_grid(L);
  const auto v = synthesize(*g, field(L));
  for (auto _ : state) benchmark::DoNotOptimize(analyze(*g, v));
}

void BM_analyze_reference(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto g = sphere_grid(L);
  const auto v = synthesize(*g, field(L));
  for (auto _ : state) benchmark::DoNotOptimize(reference::analyze(*g, v));
}

void BM_derivatives(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto g = sphere_grid(L);
  const auto f = field(L);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_derivatives(*g, f));
}

void BM_derivatives_reference(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto g = sphere_grid(L);
  const auto f = field(L);
  for (auto _ : state) benchmark::DoNotOptimize(reference::synthesize_derivatives(*g, f));
}

void BM_build_graph(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto w = solve_warp_periods(0.5, 1.0, 1e-10);
  HarmonicField f = field(L / 2);
  f *= 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(hawking_mass(build_graph(w, 0.3, f)));
}

}  // namespace

BENCHMARK(BM_synthesize)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_synthesize_reference)->Arg(16)->Arg(32);
BENCHMARK(BM_analyze)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_analyze_reference)->Arg(16)->Arg(32);
BENCHMARK(BM_derivatives)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_derivatives_reference)->Arg(16)->Arg(32);
BENCHMARK(BM_build_graph)->Arg(16)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
