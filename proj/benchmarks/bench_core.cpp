// Microbenchmarks for the hot paths: octant transforms, kernel builds,
// convolution-bound sums, and percolation sampling.

#include <benchmark/benchmark.h>

#include "lrlc/convbounds.hpp"
#include "lrlc/convolution.hpp"
#include "lrlc/models.hpp"
#include "lrlc/transform.hpp"

using namespace lrlc;

static void bm_sym_dft_d2(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  LongRangeParams p{2, 2.0, 3.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, M, true});
  for (auto _ : state) {
    SymField f = D;
    sym_dft_forward(f);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(D.values.size()));
}
BENCHMARK(bm_sym_dft_d2)->Arg(64)->Arg(256);

static void bm_sym_dft_d4(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  LongRangeParams p{4, 2.0, 3.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{4, M, true});
  for (auto _ : state) {
    SymField f = D;
    sym_dft_forward(f);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(D.values.size()));
}
BENCHMARK(bm_sym_dft_d4)->Arg(16)->Arg(32);

static void bm_power_law_build(benchmark::State& state) {
  LongRangeParams p{4, 2.0, 5.0, KernelVariant::DirectPowerLaw};
  BoxSpec box{4, static_cast<int>(state.range(0)), true};
  for (auto _ : state) {
    auto [D, tail] = build_power_law_kernel(p, box);
    benchmark::DoNotOptimize(D.values.data());
  }
}
BENCHMARK(bm_power_law_build)->Arg(16)->Arg(32);

static void bm_brute_lhs(benchmark::State& state) {
  ExponentTuple t{3.0, 0.0, 2.0, 0.0, 4, 2.0};
  BoxSpec box{4, static_cast<int>(state.range(0)), false};
  std::vector<int> x{static_cast<int>(state.range(0)) / 4, 0, 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_lhs(t, x, box));
}
BENCHMARK(bm_brute_lhs)->Arg(120)->Arg(240);

static void bm_percolation(benchmark::State& state) {
  LongRangeParams p{2, 2.0, 1.0, KernelVariant::DirectPowerLaw};
  auto [D, tail] = build_power_law_kernel(p, BoxSpec{2, 8, true});
  for (auto _ : state) {
    PercConfig cfg{BoxSpec{2, 8, true}, 0.5, 50, 17};
    benchmark::DoNotOptimize(percolation_two_point(D, cfg).G.values.data());
  }
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(bm_percolation);

BENCHMARK_MAIN();
