#include <benchmark/benchmark.h>

#include "msj/rm.hpp"
#include "msj/saturated.hpp"
#include "msj/simulator.hpp"

namespace {

msj::MsjParams system_of_size(int n) { return {1, n / 3, n, 1.0, 0.7, 0.6}; }

void BM_ProductForm(benchmark::State& state) {
  const msj::StateSpace space(system_of_size(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(msj::embedded_steady_state(space));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProductForm)->RangeMultiplier(4)->Range(12, 3072)->Complexity();

void BM_DenseOracle(benchmark::State& state) {
  const msj::TransitionMatrix tm =
      msj::transition_matrix(system_of_size(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(msj::solve_dtmc_oracle(tm));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseOracle)->RangeMultiplier(4)->Range(12, 768)->Complexity();

void BM_LambdaStar(benchmark::State& state) {
  const msj::MsjParams p = system_of_size(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(msj::lambda_star(p));
}
BENCHMARK(BM_LambdaStar)->Arg(30)->Arg(201)->Arg(3000);

msj::RmParams rm_of_size(int n) {
  msj::RmParams p{n, 1.0, std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  p.class_probs[0] = 0.5;
  p.class_probs[static_cast<std::size_t>(n / 2)] = 0.3;
  p.class_probs[static_cast<std::size_t>(n - 1)] = 0.2;
  return p;
}

void BM_RmEnumerate(benchmark::State& state) {
  const msj::RmParams p = rm_of_size(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(msj::rm_throughput_enumerate(p));
}
BENCHMARK(BM_RmEnumerate)->DenseRange(4, 12, 4);

void BM_RmRecursion(benchmark::State& state) {
  const msj::RmParams p = rm_of_size(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(msj::rm_throughput_dp(p));
}
BENCHMARK(BM_RmRecursion)->DenseRange(4, 12, 4)->Arg(1000);

void BM_Simulate(benchmark::State& state) {
  const msj::MsjParams p{3, 10, 30, 1.0, 0.5, 0.7};
  const auto mode = state.range(0) == 0 ? msj::SimMode::kSaturated : msj::SimMode::kOpen;
  std::uint64_t events = 0;
  for (auto _ : state) {
    const msj::SimStats s = msj::simulate(msj::make_config(p, mode, 2e4, 1, 3.0));
    events += s.events;
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
