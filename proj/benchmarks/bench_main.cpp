#include <benchmark/benchmark.h>

#include "strux/hwb.hpp"
#include "strux/oracle.hpp"
#include "strux/simulation.hpp"
#include "strux/transforms.hpp"
#include "strux/validators.hpp"

using namespace strux;

namespace {

const HwbInstance& hwb(int n) {
  static const HwbInstance h10 = build_hwb(10);
  static const HwbInstance h20 = build_hwb(20);
  static const HwbInstance h30 = build_hwb(30);
  switch (n) {
    case 10: return h10;
    case 20: return h20;
    default: return h30;
  }
}

// A shell restriction pinning everything outside the subtree that holds the
// low half of the index block. Exercises the pruning path restrict takes on
// every simulation key.
Assignment half_shell(const HwbInstance& h) {
  Assignment p;
  std::size_t cut = h.n / 2;
  for (VarId v : h.d.universe().to_vector())
    if (v > VarId(cut)) p.set(v, (v & 1) != 0);
  return p;
}

void BM_BuildHwb(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_hwb(n));
}

void BM_Simulate(benchmark::State& state) {
  const HwbInstance& h = hwb(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    SimulationResult r = simulate(h.d, h.dbar, h.vtree);
    benchmark::DoNotOptimize(r.s);
  }
}

void BM_Restrict(benchmark::State& state) {
  const HwbInstance& h = hwb(static_cast<int>(state.range(0)));
  Assignment p = half_shell(h);
  for (auto _ : state) benchmark::DoNotOptimize(restrict(h.d, h.vtree, p));
}

void BM_SmoothAfterRestrict(benchmark::State& state) {
  const HwbInstance& h = hwb(static_cast<int>(state.range(0)));
  Assignment p = half_shell(h);
  Circuit pruned = restrict(h.d, h.vtree, p).circuit;
  Circuit simple = make_simple(pruned);
  for (auto _ : state) benchmark::DoNotOptimize(smooth(simple, h.vtree));
}

void BM_ModelCount(benchmark::State& state) {
  const HwbInstance& h = hwb(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model_count(h.d));
}

void BM_CheckSdd(benchmark::State& state) {
  const HwbInstance& h = hwb(10);
  static const SimulationResult r = simulate(h.d, h.dbar, h.vtree);
  for (auto _ : state) benchmark::DoNotOptimize(check_sdd(r.s, r.t_prime()));
}

}  // namespace

BENCHMARK(BM_BuildHwb)->Arg(10)->Arg(20)->Arg(30);
BENCHMARK(BM_Simulate)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Restrict)->Arg(10)->Arg(20);
BENCHMARK(BM_SmoothAfterRestrict)->Arg(10)->Arg(20);
BENCHMARK(BM_ModelCount)->Arg(10)->Arg(20);
BENCHMARK(BM_CheckSdd)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
