#include <benchmark/benchmark.h>

#include "courier/engine.hpp"
#include "courier/study.hpp"

namespace {

using namespace courier;

void BM_ZoneOf(benchmark::State& state) {
  const CityModel& city = bundled_city();
  const ScenarioModel model(ModelParams::defaults(), *find_preset("base"));
  std::vector<GeoPoint> points;
  for (std::size_t i = 0; i < 1024; ++i) {
    points.push_back(sample_order(model, city, order_stream(1, i)).origin);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(city.zone_of(points[i++ & 1023]));
  }
}
BENCHMARK(BM_ZoneOf);

void BM_NearestStation(benchmark::State& state) {
  const CityModel& city = bundled_city();
  const GeoPoint p{40.7580, -73.9855};
  for (auto _ : state) benchmark::DoNotOptimize(city.nearest_station(p, Network::subway).id);
}
BENCHMARK(BM_NearestStation);

// One order, every alternative of the scenario, state.range(0) replications.
void BM_EvaluateOrder(benchmark::State& state, const char* preset) {
  const CityModel& city = bundled_city();
  const ScenarioModel model(ModelParams::defaults(), *find_preset(preset));
  const Order order = sample_order(model, city, order_stream(7, 0));
  const auto reps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_order(order, model, city, RngStream(3), reps).best_time);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_EvaluateOrder, base, "base")->Arg(30)->Arg(200);
BENCHMARK_CAPTURE(BM_EvaluateOrder, emerging, "emerging")->Arg(30);

void BM_RunStudy(benchmark::State& state) {
  StudyConfig cfg;
  cfg.scenario = *find_preset("base");
  cfg.orders = static_cast<std::size_t>(state.range(0));
  cfg.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_study(cfg, bundled_city(), ModelParams::defaults()).no_feasible);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunStudy)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
