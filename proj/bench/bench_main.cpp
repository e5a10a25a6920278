#include <benchmark/benchmark.h>

#include "odt/network.hpp"
#include "odt/pipeline.hpp"
#include "odt/routing.hpp"

namespace {

void BM_AllPairsSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto net = odt::generate_grid(n, n, 500, 11.1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(odt::DistanceTable::compute_serial(net));
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_AllPairsParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto net = odt::generate_grid(n, n, 500, 11.1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(odt::DistanceTable::compute(net));
  state.SetItemsProcessed(state.iterations() * n * n);
}

odt::Config sweep_config() {
  odt::Config c;
  c.network.grid = odt::GridSpec{10, 10, 500, 11.1};
  c.demand.synthetic_count = 100;
  c.systems = {odt::SystemType::crowdsourced_exclusive, odt::SystemType::crowdsourced_shared,
               odt::SystemType::dedicated_darp};
  odt::SupplySchedule s;
  s.vehicles.fill(3);
  c.supply.crowdsourced = s;
  c.supply.dedicated = s;
  c.supply.alpha = 1;
  c.seed = 7;
  return c;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto c = sweep_config();
  const auto in = odt::prepare_inputs(c);
  for (auto _ : state) benchmark::DoNotOptimize(odt::run_sweep_serial(c, in));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto c = sweep_config();
  const auto in = odt::prepare_inputs(c);
  for (auto _ : state) benchmark::DoNotOptimize(odt::run_sweep(c, in));
}

}  // namespace

BENCHMARK(BM_AllPairsSerial)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AllPairsParallel)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
