#include <benchmark/benchmark.h>

#include "adpulse/floquet.hpp"
#include "adpulse/registry.hpp"
#include "adpulse/sweep.hpp"

using namespace adpulse;

namespace {

SpinSystem bath(int n) { return make_system(khz_to_angular(431.5), random_register(n, 7)); }

void BM_PeriodPropagator(benchmark::State& st) {
  const auto sys = bath(int(st.range(0)));
  const auto method = st.range(1) ? ExpMethod::dense : ExpMethod::fast;
  const auto seq = build_sequence(make_protocol(Family::polcpmg, 0.25 * kPi), 0.9e-6);
  for (auto _ : st) benchmark::DoNotOptimize(one_period_propagator(sys, seq, method).matrix.data());
}
BENCHMARK(BM_PeriodPropagator)->ArgsProduct({{1, 3, 5, 7}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_FloquetDecompose(benchmark::State& st) {
  const auto sys = bath(int(st.range(0)));
  const auto p = one_period_propagator(sys, build_sequence(make_protocol(Family::cpmg), 0.9e-6));
  for (auto _ : st) benchmark::DoNotOptimize(floquet_decompose(p).eigenphases.data());
}
BENCHMARK(BM_FloquetDecompose)->DenseRange(1, 7, 2)->Unit(benchmark::kMicrosecond);

// 100 sweep steps on a mixed start.
void BM_SweepSteps(benchmark::State& st) {
  const auto sys = bath(int(st.range(0)));
  const auto init = make_initial_state(sys, {ElectronState::Kind::xplus}, {NuclearState::Kind::maximally_mixed});
  const auto spec = make_protocol(Family::polcpmg, 0.25 * kPi);
  const auto sched = make_schedule(0.85e-6, 0.85e-6 + 99e-9, 1e-9);
  SweepOptions opt;
  opt.record_steps = false;
  for (auto _ : st) benchmark::DoNotOptimize(run_sweep(init, sys, spec, sched, opt).t_total);
}
BENCHMARK(BM_SweepSteps)->DenseRange(1, 5, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
