#include <benchmark/benchmark.h>

#include "geoperc/geoperc.hpp"

using namespace geoperc;

namespace {

void BM_SampleMarkedPoints(benchmark::State& state) {
  const double side = static_cast<double>(state.range(0));
  const Rect region = Rect::square({0, 0}, side / 2);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_marked_points(1.0, region, seed++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}
BENCHMARK(BM_SampleMarkedPoints)->Arg(10)->Arg(40)->Arg(160);

void BM_VoronoiEvaluate(benchmark::State& state) {
  const Rect window = Rect::square({0, 0}, 50);
  const FieldRealization f = build_voronoi_field({0.1, 0.5, 1.0, 3.0}, window, 0.01, 7);
  double x = -49.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.evaluate({x, 0.37 * x}));
    x = x > 49.0 ? -49.0 : x + 0.173;
  }
}
BENCHMARK(BM_VoronoiEvaluate);

// Realize an n x 3n box of unit discs just above criticality and compute
// both crossing thresholds.
void BM_CrossingThresholds(benchmark::State& state) {
  const double n = static_cast<double>(state.range(0));
  const ModelSpec unit = ModelSpec::geostatistical(FieldSpec::constant(1.0));
  const Rect rect(0, 3 * n, 0, n);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const Scene s = realize_scene(unit, 0.6, rect, seed++);
    benchmark::DoNotOptimize(crossing_thresholds(s.occupied, rect));
  }
}
BENCHMARK(BM_CrossingThresholds)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_HasCrossing(benchmark::State& state) {
  const double n = static_cast<double>(state.range(0));
  const Rect rect(0, 3 * n, 0, n);
  const Scene s = realize_scene(ModelSpec::geostatistical(FieldSpec::constant(1.0)), 0.4, rect, 3);
  for (auto _ : state)
    benchmark::DoNotOptimize(has_crossing(s.occupied, {rect, Direction::horizontal, Phase::occupied}));
}
BENCHMARK(BM_HasCrossing)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
