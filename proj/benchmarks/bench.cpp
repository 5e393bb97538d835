#include <benchmark/benchmark.h>

#include "cmf/correlation.hpp"
#include "cmf/sampling.hpp"
#include "cmf/templates.hpp"
#include "cmf/tone.hpp"

namespace {

cmf::DelayMeasurements delay_case(std::size_t m) {
  cmf::FrequencyBand band(600.0);
  auto t = cmf::make_gaussian_pulse(0.005);
  cmf::RngSpec seed{1, 0};
  return cmf::synthesize_delay_measurements(t, {1.0, 0.4, 0.1}, band, cmf::draw_frequencies(band, m, seed), seed);
}

void BM_AcfUniformGrid(benchmark::State& state) {
  auto meas = delay_case(static_cast<std::size_t>(state.range(0)));
  auto t = cmf::make_gaussian_pulse(0.005);
  auto grid = cmf::UniformGrid::spanning(0.0, 1.0, 1.0 / 4800.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmf::acf_estimate(meas, t, grid));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(grid.count));
}
BENCHMARK(BM_AcfUniformGrid)->Arg(10)->Arg(50)->Arg(200);

void BM_AcfPointwise(benchmark::State& state) {
  auto meas = delay_case(static_cast<std::size_t>(state.range(0)));
  auto t = cmf::make_gaussian_pulse(0.005);
  auto pts = cmf::UniformGrid::spanning(0.0, 1.0, 1.0 / 4800.0).points();
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmf::acf_estimate(meas, t, std::span<const double>(pts)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(pts.size()));
}
BENCHMARK(BM_AcfPointwise)->Arg(10)->Arg(50)->Arg(200);

void BM_AutocorrelationCurve(benchmark::State& state) {
  cmf::FrequencyBand band(600.0);
  auto t = cmf::make_gaussian_pulse(0.005);
  auto taus = cmf::UniformGrid::spanning(-0.5, 0.5, 1.0 / 4800.0).points();
  cmf::QuadratureSpec quad{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmf::autocorrelation_curve(t, band, taus, quad));
  }
}
BENCHMARK(BM_AutocorrelationCurve)->Arg(4096)->Arg(65536);

void BM_EstimateTone(benchmark::State& state) {
  cmf::FrequencyBand band(100.0);
  cmf::SearchWindow win(-1.0, 1.0);
  cmf::RngSpec seed{2, 0};
  auto m = static_cast<std::size_t>(state.range(0));
  auto meas = cmf::synthesize_tone_measurements(37.3, 1.0, 0.0, win, cmf::draw_times(win, m, seed), seed);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cmf::estimate_tone(meas, band));
  }
}
BENCHMARK(BM_EstimateTone)->Arg(30)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
