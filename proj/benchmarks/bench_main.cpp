#include <benchmark/benchmark.h>

#include "varext/density.hpp"
#include "varext/estimators.hpp"
#include "varext/rng.hpp"
#include "varext/simulation.hpp"
#include "varext/uniformity.hpp"

namespace {

varext::Sample uniform_sample(std::size_t n) {
  varext::Substream rng{1, n};
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform();
  return varext::make_sample(std::move(x));
}

void BM_KdeGrid(benchmark::State& state) {
  const auto s = uniform_sample(static_cast<std::size_t>(state.range(0)));
  const double h = varext::silverman_bandwidth(s);
  const auto model = varext::make_density_model(s, h);
  const auto grid = varext::default_grid(s, h);
  for (auto _ : state) benchmark::DoNotOptimize(varext::kde_on_grid(model, grid));
}
BENCHMARK(BM_KdeGrid)->Arg(20)->Arg(100)->Arg(1000);

void BM_Estimator(benchmark::State& state) {
  const auto id = static_cast<varext::EstimatorId>(state.range(0));
  const auto s = uniform_sample(static_cast<std::size_t>(state.range(1)));
  state.SetLabel(std::string(varext::to_string(id)));
  for (auto _ : state) benchmark::DoNotOptimize(varext::estimate(id, s).value);
}
BENCHMARK(BM_Estimator)->ArgsProduct({{0, 1, 2, 3, 4}, {20, 100}});

void BM_Statistic(benchmark::State& state) {
  const auto kind = static_cast<varext::StatKind>(state.range(0));
  const auto s = uniform_sample(30);
  state.SetLabel(std::string(varext::to_string(kind)));
  for (auto _ : state) benchmark::DoNotOptimize(varext::statistic(kind, s));
}
BENCHMARK(BM_Statistic)->DenseRange(0, 11);

void BM_Calibrate(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        varext::calibrate_critical_value(varext::StatKind::GD, 20, 0.05, 1000, 3, 1));
  }
}
BENCHMARK(BM_Calibrate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
