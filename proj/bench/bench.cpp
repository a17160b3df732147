// Serial reference kernels against their OpenMP versions. With one core the
// parallel runs measure scheduling overhead only.

#include <benchmark/benchmark.h>

#include "stablegl/folang/eval.hpp"
#include "stablegl/order3.hpp"

using namespace stablegl;

namespace {

void BM_BruteForceClassCount(benchmark::State& state) {
  const Field f = field_make(2);
  const auto sig = Order3Signature::xi(1, 0);
  BruteForceOptions o;
  o.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(class_count_products_bruteforce(f, sig, 4, o).count);
  state.SetLabel(o.parallel ? "openmp" : "serial");
}
BENCHMARK(BM_BruteForceClassCount)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_StructuralClassCount(benchmark::State& state) {
  const Field f = field_make(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(class_count_products(f, Order3Signature::xi(2, 1), static_cast<int>(state.range(0))).count);
}
BENCHMARK(BM_StructuralClassCount)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_EvalPhi(benchmark::State& state) {
  const Field f = field_make(2);
  fol::EvalOptions o;
  o.witness_bound = 8;
  o.workers = static_cast<int>(state.range(0));
  const fol::Bindings b{{"A", diag(f, {f->xi()})}};
  for (auto _ : state) benchmark::DoNotOptimize(fol::eval("phi(A)", f, b, o).value);
  state.SetLabel(o.workers == 1 ? "serial" : "openmp");
}
BENCHMARK(BM_EvalPhi)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EvalFullEnumeration(benchmark::State& state) {
  const Field f = field_make(1);
  fol::EvalOptions o;
  o.witness_bound = 3;
  o.force_full = true;
  o.workers = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(fol::eval("forall X in group @3: exists Y in conj(X) @3: X Y = Y X", f, {}, o).value);
  state.SetLabel(o.workers == 1 ? "serial" : "openmp");
}
BENCHMARK(BM_EvalFullEnumeration)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
