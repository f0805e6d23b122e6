#include "confstab/conformal.hpp"
#include "confstab/curvature.hpp"
#include "confstab/ellipsoid.hpp"
#include "confstab/immersion.hpp"
#include "confstab/stability.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace confstab;

void BM_RiemannRoundSphere(benchmark::State& state) {
  const ChartBox chart = ChartBox::cube(static_cast<int>(state.range(0)), -1.0, 1.0);
  const MetricField metric = round_sphere_metric(chart);
  const Point x = Point::Constant(chart.dim(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(riemann(metric, x));
}
BENCHMARK(BM_RiemannRoundSphere)->Arg(2)->Arg(4)->Arg(6);

void BM_RiemannInducedEllipsoid(benchmark::State& state) {
  const MetricField metric = induced_metric(ellipsoid_graph({0.8, 4}));
  const Point x = Point::Constant(4, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(riemann(metric, x));
}
BENCHMARK(BM_RiemannInducedEllipsoid);

void BM_BoundAudit(benchmark::State& state) {
  const auto iters = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bound_audit(2, 3, 2, iters, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * iters));
}
BENCHMARK(BM_BoundAudit)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_MaxConfII(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(max_conf_ii({0.8, 4}, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_MaxConfII)->Arg(1001)->Arg(10001)->Unit(benchmark::kMillisecond);

void BM_AdmissibleRangeMeasured(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(admissible_range(1.2, RangeBasis::kMeasuredMax));
}
BENCHMARK(BM_AdmissibleRangeMeasured)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
