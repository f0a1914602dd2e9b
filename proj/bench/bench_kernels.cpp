// Serial reference vs OpenMP kernels. With one hardware thread the two should
// run at about the same speed; the interesting numbers come from wider hosts.

#include <vector>

#include <benchmark/benchmark.h>

#include "oculus/intent.hpp"
#include "oculus/kernels.hpp"
#include "oculus/random.hpp"

namespace {

using namespace oculus;
using kernels::Backend;

std::vector<kernels::Clip> clips_for_d_ar(Rng& rng) {
  const auto& part = IntentConfig::defaults().rulebase().outputs().at("d_ar");
  std::vector<kernels::Clip> clips;
  for (const auto& label : part.labels()) clips.push_back({&label.mf, rng.unit()});
  return clips;
}

void BM_Aggregate(benchmark::State& state, Backend backend) {
  Rng rng(1);
  const auto clips = clips_for_d_ar(rng);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> out(n);
  const double step = 100.0 / static_cast<double>(n - 1);
  for (auto _ : state) {
    kernels::aggregate(backend, clips, -50.0, step, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_Moments(benchmark::State& state, Backend backend) {
  Rng rng(2);
  std::vector<double> mu(static_cast<std::size_t>(state.range(0)));
  for (auto& m : mu) m = rng.unit();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::centroid_moments(backend, mu));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ComputeDeltas(benchmark::State& state, Backend backend) {
  Rng rng(3);
  std::vector<DeltaQuery> qs;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    qs.push_back({MentalityState(rng.uniform(-200, 200), rng.uniform(-200, 200)),
                  1 + static_cast<int>(rng.below(6))});
  }
  const auto& cfg = IntentConfig::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(compute_deltas(qs, cfg, backend));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Aggregate, serial, Backend::serial)->Arg(1001)->Arg(10001)->Arg(100001)->Arg(1000001);
BENCHMARK_CAPTURE(BM_Aggregate, openmp, Backend::openmp)->Arg(1001)->Arg(10001)->Arg(100001)->Arg(1000001);
BENCHMARK_CAPTURE(BM_Moments, serial, Backend::serial)->Arg(1001)->Arg(10001)->Arg(100001)->Arg(1000001);
BENCHMARK_CAPTURE(BM_Moments, openmp, Backend::openmp)->Arg(1001)->Arg(10001)->Arg(100001)->Arg(1000001);
BENCHMARK_CAPTURE(BM_ComputeDeltas, serial, Backend::serial)->Arg(1000);
BENCHMARK_CAPTURE(BM_ComputeDeltas, openmp, Backend::openmp)->Arg(1000);

BENCHMARK_MAIN();
