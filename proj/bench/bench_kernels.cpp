// Serial reference loops against the OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include "resdensity/boxstat.hpp"
#include "resdensity/heights.hpp"
#include "resdensity/localcount.hpp"

using namespace resdensity;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_CountModP(benchmark::State& state) {
  const long p = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(localcount::count_mod_p(2, p, exec_of(state)));
  label(state);
}
BENCHMARK(BM_CountModP)->ArgsProduct({{0, 1}, {7, 11, 13}})->Unit(benchmark::kMillisecond);

void BM_CountModPReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(localcount::count_mod_p_reference(2, state.range(0)));
}
BENCHMARK(BM_CountModPReference)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_Census(benchmark::State& state) {
  const long x = state.range(1);
  for (auto _ : state) benchmark::DoNotOptimize(heights::enumerate_census(2, x, {}, exec_of(state)));
  label(state);
}
BENCHMARK(BM_Census)->ArgsProduct({{0, 1}, {3, 6}})->Unit(benchmark::kMillisecond);

void BM_CensusReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(heights::enumerate_census_reference(2, state.range(0), {}));
}
BENCHMARK(BM_CensusReference)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_BoxSample(benchmark::State& state) {
  const auto box = boxstat::uniform_box(2, 1000);
  const auto samples = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(boxstat::box_sample(2, box, samples, 42, boxstat::Predicate::squarefree, exec_of(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(1));
  label(state);
}
BENCHMARK(BM_BoxSample)->ArgsProduct({{0, 1}, {100000, 1000000}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
