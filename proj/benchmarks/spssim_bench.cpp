#include <benchmark/benchmark.h>

#include <vector>

#include "spssim/channel_model.hpp"
#include "spssim/sim_engine.hpp"
#include "spssim/sps_scheduler.hpp"

namespace {

using namespace spssim;

// A full sensing window of busy monitored slots with one SCI per subframe.
SensingRecord busy_record(const GridConfig& grid, const SpsConfig& sps, Subframe now) {
  RandomStream rng(1);
  SensingRecord rec(grid.n_subch(), sps.sensing_window(), 1e-13, now - sps.sensing_window());
  std::vector<double> rssi(static_cast<std::size_t>(grid.n_subch()));
  for (Subframe t = now - sps.sensing_window(); t < now; ++t) {
    for (double& v : rssi) v = 1e-12 * (1.0 + uniform01(rng) * 100.0);
    const int start = static_cast<int>(rng() % 2) * grid.l_subch;
    const std::vector<SciEntry> scis{{0, {t, start, grid.l_subch}, -90.0 + 20.0 * uniform01(rng), 100, false}};
    if (t % 97 == 0)
      rec.record_unmonitored(t);
    else
      rec.record_monitored(t, rssi, scis);
  }
  return rec;
}

void BM_Exempt(benchmark::State& state) {
  const GridConfig grid;
  const SpsConfig sps;
  const Subframe now = 5000;
  const SensingRecord rec = busy_record(grid, sps, now);
  const auto window = build_report_window(now, sps, grid);
  const int horizon = exemption_horizon_ms(sps);
  for (auto _ : state) benchmark::DoNotOptimize(exempt(window, rec, sps, now, horizon));
}
BENCHMARK(BM_Exempt);

void BM_RankSelect(benchmark::State& state) {
  const GridConfig grid;
  const SpsConfig sps;
  const Subframe now = 5000;
  const SensingRecord rec = busy_record(grid, sps, now);
  const CandidateSet set = exempt(build_report_window(now, sps, grid), rec, sps, now,
                                  exemption_horizon_ms(sps));
  RandomStream rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(rank_select(set, rec, sps, now, &rng));
}
BENCHMARK(BM_RankSelect);

void BM_LinkLoss(benchmark::State& state) {
  const PathLossTable table = PathLossTable::fowlerville();
  const TwoRayParams params = TwoRayParams::from_carrier(5.86e9, 1.5);
  RandomStream rng(3);
  double d = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(link_loss_db(d, params, table, rng));
    d = d > 1000.0 ? 1.0 : d + 3.7;
  }
}
BENCHMARK(BM_LinkLoss);

void BM_FadingSampler(benchmark::State& state) {
  const FadingSampler weibull(FadingLaw{FadingLaw::Kind::Weibull, 1.4});
  RandomStream rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(weibull(rng));
}
BENCHMARK(BM_FadingSampler);

void BM_EngineSecond(benchmark::State& state) {
  RunConfig cfg;
  apply_preset(cfg.scenario, state.range(0) == 1 ? "s1" : "s2");
  cfg.scenario.sim_time_s = 1.0;
  for (auto _ : state) {
    Simulation sim(cfg);
    while (!sim.done()) sim.step();
    benchmark::DoNotOptimize(sim.counters().transmissions);
  }
  state.SetLabel(state.range(0) == 1 ? "s1, 1 s" : "s2, 1 s");
}
BENCHMARK(BM_EngineSecond)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
