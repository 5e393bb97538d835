#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cmf/correlation.hpp"
#include "cmf/errors.hpp"
#include "cmf/sampling.hpp"
#include "oracles.hpp"

using namespace cmf;

namespace {

DelayMeasurements gaussian_meas(std::size_t m, double tau0, double sigma, RngSpec seed, complex amp = 1.0) {
  FrequencyBand band(600.0);
  auto t = make_gaussian_pulse(0.005);
  return synthesize_delay_measurements(t, {amp, tau0, sigma}, band, draw_frequencies(band, m, seed), seed);
}

std::vector<complex> spectrum_at(const Template& t, const std::vector<double>& w) {
  std::vector<complex> s;
  for (double v : w) {
    s.push_back(t.spectrum(v));
  }
  return s;
}

}  // namespace

TEST_CASE("correlation process matches a direct sum") {
  auto t = make_flat_band(1.3, FrequencyBand(600.0), std::pair{-100.0, 500.0});
  FrequencyBand band(600.0);
  RngSpec seed{21, 3};
  auto meas = synthesize_delay_measurements(t, {{0.7, -0.4}, 0.31, 0.5}, band, draw_frequencies(band, 64, seed), seed);
  auto s = spectrum_at(t, meas.freqs);
  for (double tau : {0.0, 0.1, 0.31, 0.77, 1.0}) {
    auto want = oracle::correlation_sum(meas.freqs, meas.y, s, tau);
    CHECK(std::abs(correlation_process(meas, t, tau) - want) < 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("uniform grid fast path agrees with per-point evaluation") {
  auto meas = gaussian_meas(80, 0.4, 0.2, RngSpec{5, 5});
  auto t = make_gaussian_pulse(0.005);
  auto grid = UniformGrid::spanning(0.0, 1.0, 1.0 / 4800.0);
  auto pts = grid.points();
  auto fast = acf_estimate(meas, t, grid);
  auto slow = acf_estimate(meas, t, std::span<const double>(pts));
  REQUIRE(fast.size() == slow.size());
  double peak = 0.0;
  for (auto v : slow.values) {
    peak = std::max(peak, std::abs(v));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < fast.size(); ++i) {
    worst = std::max(worst, std::abs(fast.values[i] - slow.values[i]));
  }
  CHECK(worst < 1e-12 * peak);
  CHECK(fast.scale == doctest::Approx(1200.0 / (2.0 * std::numbers::pi * 80.0)));
}

TEST_CASE("real case keeps only the real part") {
  auto meas = gaussian_meas(30, 0.2, 0.3, RngSpec{2, 2});
  auto t = make_gaussian_pulse(0.005);
  auto tr = acf_estimate(meas, t, UniformGrid::spanning(0.0, 1.0, 0.01));
  auto s = spectrum_at(t, meas.freqs);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.values[i].imag() == 0.0);
    double want = tr.scale * oracle::correlation_sum(meas.freqs, meas.y, s, tr.taus[i]).real();
    CHECK(std::abs(tr.values[i].real() - want) < 1e-12 * tr.scale * 30.0);
  }
}

TEST_CASE("uniform grid construction") {
  auto g = UniformGrid::spanning(0.0, 1.0, 1.0 / 4800.0);
  CHECK(g.count == 4801);
  CHECK(g.at(1920) == 0.4);
  CHECK(g.at(0) == 0.0);
  CHECK(g.at(4800) == 1.0);
  auto h = UniformGrid::spanning(0.0, 1.0, 0.3);
  CHECK(h.count == 5);
  CHECK(h.step() <= 0.3);
  CHECK_THROWS_AS(UniformGrid::spanning(0.0, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(UniformGrid::spanning(1.0, 1.0, 0.1), InvalidParameter);

  FrequencyBand band(600.0);
  CHECK(default_grid_step(band) == doctest::Approx(1.0 / 4800.0));
  CHECK(default_grid_step(band, 0.0004) == doctest::Approx(0.0001));
  CHECK(default_grid_step(band, 0.015) == doctest::Approx(1.0 / 4800.0));
}

TEST_CASE("grid search ties go to the smallest tau") {
  CorrelationTrace tr;
  tr.taus = {0.0, 0.1, 0.2, 0.3};
  tr.values = {complex{1.0, 0.0}, complex{0.0, 2.0}, complex{-2.0, 0.0}, complex{1.0, 1.0}};
  auto p = grid_search(tr);
  CHECK(p.index == 1);
  CHECK(p.tau == 0.1);
  CHECK(p.magnitude == 2.0);

  CHECK(runner_up_gap(tr, p, 0.15) == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK_FALSE(runner_up_gap(tr, p, 5.0).has_value());
  CHECK_THROWS_AS(grid_search(CorrelationTrace{}), InvalidParameter);
}

TEST_CASE("noiseless measurements peak exactly at the true delay") {
  for (complex amp : {complex{1.0, 0.0}, complex{-2.5, 0.0}}) {
    auto meas = gaussian_meas(50, 0.4, 0.0, RngSpec{1, 0}, amp);
    auto t = make_gaussian_pulse(0.005);
    auto est = estimate_delay_amplitude(meas, t, SearchWindow(0.0, 1.0), 1.0 / 4800.0, 0.015);
    CHECK(est.tau_hat == 0.4);
    CHECK(std::abs(est.amplitude_hat - amp) < 1e-12);
    REQUIRE(est.runner_up_gap.has_value());
    CHECK(*est.runner_up_gap > 0.0);
  }

  FrequencyBand band(200.0);
  auto cplx = make_flat_band(1.0, band, std::pair{-50.0, 200.0});
  RngSpec seed{7, 1};
  complex amp{0.3, -1.1};
  auto meas = synthesize_delay_measurements(cplx, {amp, 0.25, 0.0}, band, draw_frequencies(band, 40, seed), seed);
  auto est = estimate_delay_amplitude(meas, cplx, SearchWindow(0.0, 1.0), 1.0 / 800.0);
  CHECK(est.tau_hat == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::abs(est.amplitude_hat - amp) < 1e-12);
  CHECK_FALSE(est.runner_up_gap.has_value());
}

TEST_CASE("amplitude estimate is degenerate when no sample sees the template") {
  FrequencyBand band(600.0);
  auto t = make_flat_band(1.0, band, std::pair{599.0, 600.0});
  auto meas = synthesize_delay_measurements(t, {1.0, 0.3, 0.1}, band, {-10.0, 20.0, 300.0}, RngSpec{});
  CHECK_THROWS_AS(amplitude_estimate(meas, t, 0.3), DegenerateMeasurement);
  CHECK_THROWS_AS(estimate_delay_amplitude(meas, t, SearchWindow(0.0, 1.0), 0.01), DegenerateMeasurement);
}

TEST_CASE("the rescaled correlation is unbiased for the mean function") {
  FrequencyBand band(600.0);
  auto t = make_gaussian_pulse(0.005);
  auto metrics = compute_metrics(t, band);
  double eta = metrics.eta(1.0);
  std::vector<double> at_peak, off_peak;
  std::vector<double> taus{0.4, 0.403};
  for (std::uint64_t i = 0; i < 2000; ++i) {
    auto meas = gaussian_meas(50, 0.4, 0.5, RngSpec{99, i});
    auto tr = acf_estimate(meas, t, std::span<const double>(taus));
    at_peak.push_back(tr.values[0].real());
    off_peak.push_back(tr.values[1].real());
  }
  auto mp = oracle::moments(at_peak);
  auto mo = oracle::moments(off_peak);
  auto mean = mean_function(t, band, 1.0, 0.4, taus);
  CHECK(mean[0].real() == doctest::Approx(eta).epsilon(1e-12));
  CHECK(std::abs(mp.mean - eta) < 4.0 * std::sqrt(mp.var / 2000.0));
  CHECK(std::abs(mo.mean - mean[1].real()) < 4.0 * std::sqrt(mo.var / 2000.0));
}

TEST_CASE("deviation supremum") {
  auto t = make_gaussian_pulse(0.005);
  FrequencyBand band(600.0);
  DelayScene truth{1.0, 0.4, 0.0};
  auto meas = gaussian_meas(50, 0.4, 0.0, RngSpec{3, 3});
  SearchWindow win(0.0, 1.0);
  double d = deviation_supremum(meas, t, truth, win, 1.0 / 4800.0, QuadratureSpec{8192});

  auto grid = UniformGrid::spanning(0.0, 1.0, 1.0 / 4800.0);
  auto tr = acf_estimate(meas, t, grid);
  auto mean = mean_function(t, band, 1.0, 0.4, tr.taus, QuadratureSpec{8192});
  double want = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    want = std::max(want, std::abs(tr.values[i] - mean[i]));
  }
  CHECK(d == doctest::Approx(want).epsilon(1e-12));
  CHECK(d > 0.0);
  CHECK_THROWS_AS(deviation_supremum(tr, std::vector<complex>(3)), InvalidParameter);
}

TEST_CASE("test vector entries") {
  auto g = make_gaussian_pulse(0.01);
  auto flat = make_flat_band(1.0, FrequencyBand(100.0));
  CHECK(test_vector_entry(30.0, 0.0, g) == g.spectrum(30.0));
  CHECK(std::abs(std::abs(test_vector_entry(30.0, 0.77, flat)) - 1.0) < 1e-15);
  CHECK(std::abs(test_vector_entry(-30.0, 0.3, g) - std::conj(test_vector_entry(30.0, 0.3, g))) < 1e-16);
}

TEST_CASE("noiseless flat correlation equals m at the true delay") {
  FrequencyBand band(100.0);
  auto flat = make_flat_band(1.0, band);
  RngSpec seed{4, 0};
  auto meas = synthesize_delay_measurements(flat, {1.0, 0.3, 0.0}, band, draw_frequencies(band, 37, seed), seed);
  CHECK(std::abs(correlation_process(meas, flat, 0.3) - 37.0) < 1e-12);
  double energy = 0.0;
  for (auto v : meas.y) {
    energy += std::norm(v);
  }
  std::vector<double> taus{0.3};
  auto tr = acf_estimate(meas, flat, std::span<const double>(taus));
  CHECK(std::abs(tr.values[0]) == doctest::Approx(band.width() * energy / (2.0 * std::numbers::pi * 37.0)));
}

TEST_CASE("noiseless argmax invariance in the complex case") {
  FrequencyBand band(200.0);
  auto t = make_custom({-200.0, -50.0, 0.0, 120.0, 200.0}, {0.2, 1.0, 0.4, 1.5, 0.1});
  for (std::uint64_t s = 0; s < 5; ++s) {
    RngSpec seed{31, s};
    auto meas = synthesize_delay_measurements(t, {{0.5, 0.5}, 0.5, 0.0}, band, draw_frequencies(band, 25, seed), seed);
    auto tr = acf_estimate(meas, t, UniformGrid::spanning(0.0, 1.0, 1.0 / 1600.0));
    double at_truth = std::abs(tr.values[800]);
    REQUIRE(tr.taus[800] == 0.5);
    for (auto v : tr.values) {
      CHECK(std::abs(v) <= at_truth * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("pointwise variance stays below eta^2 mu1^2 / m") {
  FrequencyBand band(600.0);
  auto t = make_gaussian_pulse(0.005);
  auto metrics = compute_metrics(t, band);
  const std::size_t m = 50;
  const std::size_t n = 10000;
  auto grid = UniformGrid::spanning(0.0, 1.0, 1.0 / 49.0);
  REQUIRE(grid.count == 50);
  std::vector<double> sum(grid.count), sumsq(grid.count);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto meas = gaussian_meas(m, 0.4, 0.0, RngSpec{77, i});
    auto tr = acf_estimate(meas, t, grid);
    for (std::size_t j = 0; j < grid.count; ++j) {
      double v = tr.values[j].real();
      sum[j] += v;
      sumsq[j] += v * v;
    }
  }
  double limit = 1.1 * std::pow(metrics.eta(1.0) * metrics.mu1, 2) / static_cast<double>(m);
  for (std::size_t j = 0; j < grid.count; ++j) {
    double mean = sum[j] / n;
    double var = (sumsq[j] - n * mean * mean) / (n - 1);
    CHECK(var <= limit);
  }
}

TEST_CASE("complex-case processing of a real template has vanishing mean imaginary part") {
  FrequencyBand band(100.0);
  auto real_shape = make_custom({-100.0, 0.0, 100.0}, {0.5, 1.0, 0.5});
  std::vector<double> taus{0.1, 0.37};
  double im0 = 0.0;
  double spread = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    RngSpec seed{41, static_cast<std::uint64_t>(i)};
    auto meas = synthesize_delay_measurements(real_shape, {1.0, 0.3, 0.0}, band, draw_frequencies(band, 30, seed), seed);
    auto tr = acf_estimate(meas, real_shape, std::span<const double>(taus));
    im0 += tr.values[0].imag();
    spread += tr.values[0].imag() * tr.values[0].imag();
  }
  double mean = im0 / n;
  double sd = std::sqrt(spread / n - mean * mean);
  CHECK(std::abs(mean) < 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("the estimate is linear in the observations") {
  FrequencyBand band(600.0);
  auto t = make_gaussian_pulse(0.005);
  RngSpec s1{50, 1}, s2{50, 2};
  auto freqs = draw_frequencies(band, 40, s1);
  auto a = synthesize_delay_measurements(t, {1.0, 0.2, 0.3}, band, freqs, s1);
  auto b = synthesize_delay_measurements(t, {-0.4, 0.7, 0.5}, band, freqs, s2);
  auto sum = a;
  for (std::size_t k = 0; k < sum.y.size(); ++k) {
    sum.y[k] += b.y[k];
  }
  auto grid = UniformGrid::spanning(0.0, 1.0, 0.001);
  auto ta = acf_estimate(a, t, grid);
  auto tb = acf_estimate(b, t, grid);
  auto ts = acf_estimate(sum, t, grid);
  double peak = 0.0;
  for (auto v : ts.values) {
    peak = std::max(peak, std::abs(v));
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(std::abs(ts.values[i] - ta.values[i] - tb.values[i]) <= 1e-12 * peak);
  }
}

TEST_CASE("deviation concentrates for very large m") {
  FrequencyBand band(600.0);
  auto flat = make_flat_band(1.0, band);
  RngSpec seed{60, 0};
  auto meas = synthesize_delay_measurements(flat, {1.0, 0.4, 0.0}, band, draw_frequencies(band, 100000, seed), seed);
  double eta = compute_metrics(flat, band).eta(1.0);
  double d = deviation_supremum(meas, flat, {1.0, 0.4, 0.0}, SearchWindow(0.0, 1.0), 1.0 / 2400.0,
                                QuadratureSpec{1 << 14});
  CHECK(d <= 0.05 * eta);
}

TEST_CASE("mean noiseless deviation respects the expected-supremum bound") {
  FrequencyBand band(600.0);
  auto t = make_gaussian_pulse(0.005);
  auto metrics = compute_metrics(t, band, QuadratureSpec{8192});
  const std::size_t m = 50;
  SearchWindow win(0.0, 1.0);
  auto grid = UniformGrid::spanning(0.0, 1.0, 1.0 / 4800.0);
  auto mean = mean_function(t, band, 1.0, 0.4, grid.points(), QuadratureSpec{8192});
  double total = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto meas = gaussian_meas(m, 0.4, 0.0, RngSpec{70, i});
    total += deviation_supremum(acf_estimate(meas, t, grid), mean);
  }
  double rhs = 5.96 * metrics.eta(1.0) * metrics.mu1 / std::sqrt(static_cast<double>(m)) *
               std::sqrt(std::log(2.0 * band.width() * win.length()));
  CHECK(total / 200.0 <= rhs);
}
