#include <benchmark/benchmark.h>

#include "starprod/assoc.hpp"
#include "starprod/phase_space.hpp"
#include "starprod/tomography.hpp"

using namespace starprod;

static void BM_Displacement(benchmark::State& st) {
  const FockSpace s(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(displacement(s, cplx(0.4, -0.3)));
}
BENCHMARK(BM_Displacement)->Arg(16)->Arg(48)->Arg(96);

static void BM_WignerField(benchmark::State& st) {
  const FockSpace s(24);
  const Operator rho = make_state(s, StateSpec::coherent(0.5));
  const LabelGrid g = LabelGrid::square(6.0, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(symbol_field(rho, WeylPair(s), g));
}
BENCHMARK(BM_WignerField)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_MoyalKernelStar(benchmark::State& st) {
  const FockSpace s(24);
  WeylPair weyl(s);
  const LabelGrid g = LabelGrid::square(6.0, static_cast<int>(st.range(0)));
  const SymbolField f = symbol_field(make_state(s, StateSpec::coherent(0.3)), weyl, g);
  for (auto _ : st) benchmark::DoNotOptimize(weyl.kernel_star(f, f, g));
}
BENCHMARK(BM_MoyalKernelStar)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

static void BM_SKernelTrace(benchmark::State& st) {
  SOrderedPair pair(FockSpace(48), SOrder(-0.4));
  const Point a{0.2, 0.1}, b{-0.3, 0.2}, x{0.1, -0.2};
  for (auto _ : st) benchmark::DoNotOptimize(star_kernel(pair, {a, b}, x));
}
BENCHMARK(BM_SKernelTrace)->Unit(benchmark::kMillisecond);

static void BM_Tomogram(benchmark::State& st) {
  const FockSpace s(16);
  const TomographicPair pair(s, 0.2);
  const Operator vac = make_state(s, StateSpec::fock(0));
  const LabelGrid g = pair.default_grid();
  for (auto _ : st) benchmark::DoNotOptimize(tomogram_of_state(vac, pair, g));
}
BENCHMARK(BM_Tomogram)->Unit(benchmark::kMillisecond);

static void BM_AssocCheck(benchmark::State& st) {
  const StructureTensor m = matrix_mult_tensor(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(assoc_check(m));
}
BENCHMARK(BM_AssocCheck)->Arg(2)->Arg(3)->Arg(4);
BENCHMARK_MAIN();
