#include <benchmark/benchmark.h>

#include <string>

#include "sbai/bounds.hpp"
#include "sbai/lucb.hpp"

namespace {

sbai::Instance fixture(const std::string& name) {
  return sbai::load_instance(std::string(SBAI_BENCH_DATA_DIR) + "/" + name);
}

void BM_PayoffDepth2(benchmark::State& state) {
  const auto inst = fixture("depth2_k3.json");
  for (auto _ : state) benchmark::DoNotOptimize(inst.reward_map().payoff(inst.means()));
}
BENCHMARK(BM_PayoffDepth2);

void BM_LucbRun(benchmark::State& state, const char* name) {
  const auto inst = fixture(name);
  sbai::RunOptions opt;
  opt.record_trace = false;
  std::uint64_t stream = 0;
  std::uint64_t rounds = 0;
  for (auto _ : state) {
    opt.stream = stream++;
    rounds += sbai::run(inst, 0.1, opt).rounds;
  }
  state.counters["rounds"] = benchmark::Counter(static_cast<double>(rounds), benchmark::Counter::kAvgIterations);
}
BENCHMARK_CAPTURE(BM_LucbRun, two_arm, "two_arm.json");
BENCHMARK_CAPTURE(BM_LucbRun, depth2_k3, "depth2_k3.json");
BENCHMARK_CAPTURE(BM_LucbRun, transposition, "transposition.json");

void BM_LowerBound(benchmark::State& state, const char* name) {
  const auto inst = fixture(name);
  for (auto _ : state)
    benchmark::DoNotOptimize(sbai::lower_bound(inst.reward_map(), inst.means(), 0.1).tau_star());
}
BENCHMARK_CAPTURE(BM_LowerBound, two_arm, "two_arm.json");
BENCHMARK_CAPTURE(BM_LowerBound, depth2_k3, "depth2_k3.json");
BENCHMARK_CAPTURE(BM_LowerBound, transposition, "transposition.json");

void BM_SampleComplexity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sbai::sample_complexity(100.0, 0.01, 9));
}
BENCHMARK(BM_SampleComplexity);

}  // namespace

BENCHMARK_MAIN();
