#include <benchmark/benchmark.h>

#include "atsp/generators.hpp"
#include "atsp/lp.hpp"
#include "atsp/vertebrate.hpp"

namespace {

using namespace atsp;

GenModel model_arg(std::int64_t k) { return all_models()[static_cast<std::size_t>(k)]; }

void BM_SubtourLp(benchmark::State& state) {
  Digraph g = gen_instance(model_arg(state.range(0)), static_cast<int>(state.range(1)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(solve_atsp_lp(g).first.objective);
  state.SetLabel(model_name(model_arg(state.range(0))));
}

void BM_LaminarInstance(benchmark::State& state) {
  Digraph g = gen_instance(model_arg(state.range(0)), static_cast<int>(state.range(1)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(build_strongly_laminar_instance(g).lp_value);
  state.SetLabel(model_name(model_arg(state.range(0))));
}

void BM_SolveAtsp(benchmark::State& state) {
  Digraph g = gen_instance(model_arg(state.range(0)), static_cast<int>(state.range(1)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(solve_atsp(g, Rational(1)).cost);
  state.SetLabel(model_name(model_arg(state.range(0))));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (std::int64_t m = 0; m < 4; ++m) {
    for (std::int64_t n : {6, 10, 14}) b->Args({m, n});
  }
}

}  // namespace

BENCHMARK(BM_SubtourLp)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LaminarInstance)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveAtsp)->Apply(sizes)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
