#include <doctest.h>

#include <cmath>
#include <vector>

#include "cmf/errors.hpp"
#include "cmf/templates.hpp"
#include "oracles.hpp"

using namespace cmf;

namespace {

const double kA = 1.0 / 200.0;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("gaussian spectrum value at zero") {
  auto t = make_gaussian_pulse(kA);
  // sqrt(2/200) pi^{1/4} = 0.1 * 1.331335...
  CHECK(t.spectrum(0.0).real() == doctest::Approx(0.13313353638).epsilon(1e-10));
  CHECK(t.spectrum(0.0).imag() == 0.0);
  CHECK(t.spectrum(123.0).real() == doctest::Approx(oracle::gaussian_spectrum(kA, 123.0)).epsilon(1e-14));
  CHECK(t.is_real());
}

TEST_CASE("gaussian metrics agree with independent quadrature and the full-line values") {
  auto t = make_gaussian_pulse(kA);
  FrequencyBand band(3.0 / kA);
  auto m = compute_metrics(t, band);

  auto sq = [](double w) { return std::pow(oracle::gaussian_spectrum(kA, w), 2); };
  auto quad = [](double w) { return std::pow(oracle::gaussian_spectrum(kA, w), 4); };
  double l2sq = oracle::simpson(sq, band.lo(), band.hi(), 1e-13);
  double l4_4 = oracle::simpson(quad, band.lo(), band.hi(), 1e-15);
  CHECK(rel(m.l2sq, l2sq) < 1e-9);
  CHECK(rel(m.l4_4, l4_4) < 1e-9);

  // Full-line ||s||_2^2 = 2 pi; truncation to +-3/a loses 2 pi erfc(3).
  CHECK(std::abs(m.l2sq - 2.0 * oracle::pi) < 1.4e-4);
  CHECK(m.mu1 <= 1.6);
  CHECK(m.mu2 <= 3.4);
  CHECK(m.mu2 == doctest::Approx(band.width() * 2.0 * kA * std::sqrt(oracle::pi) / l2sq).epsilon(1e-9));
  CHECK(m.eta(1.0) == doctest::Approx(m.l2sq / (2.0 * oracle::pi)));
}

TEST_CASE("flat templates have unit concentration metrics") {
  FrequencyBand band(300.0);
  auto full = compute_metrics(make_flat_band(1.0, band), band);
  CHECK(std::abs(full.mu1 - 1.0) < 1e-9);
  CHECK(std::abs(full.mu2 - 1.0) < 1e-9);
  CHECK(rel(full.l2sq, band.width()) < 1e-12);

  // Quarter-width sub-band: mu1 = sqrt(4) = 2, mu2 = 4.
  auto sub = compute_metrics(make_flat_band(2.5, band, std::pair{-75.0, 75.0}), band);
  CHECK(std::abs(sub.mu1 - 2.0) < 1e-9);
  CHECK(std::abs(sub.mu2 - 4.0) < 1e-9);

  auto offset = compute_metrics(make_flat_band(1.0, band, std::pair{0.0, 150.0}), band);
  CHECK(std::abs(offset.mu1 - 2.0) < 1e-9);
  CHECK(std::abs(offset.mu2 - 4.0) < 1e-9);
}

TEST_CASE("metric ordering and quadrature convergence") {
  FrequencyBand band(100.0);
  std::vector<Template> ts{make_gaussian_pulse(0.02), make_flat_band(1.0, band, std::pair{-20.0, 60.0}),
                           make_custom({-100.0, -10.0, 0.0, 30.0, 100.0}, {0.1, 1.0, 3.0, 0.5, 0.0})};
  for (const auto& t : ts) {
    auto a = compute_metrics(t, band);
    auto b = compute_metrics(t, band, QuadratureSpec{std::size_t{1} << 17});
    CHECK(a.mu1 >= 1.0 - 1e-9);
    CHECK(a.mu1 * a.mu1 <= a.mu2 * (1.0 + 1e-9));
    CHECK(rel(a.l2sq, b.l2sq) < 1e-8);
    CHECK(rel(a.l4_4, b.l4_4) < 1e-8);
    CHECK(rel(a.mu1, b.mu1) < 1e-8);
    CHECK(rel(a.mu2, b.mu2) < 1e-8);
  }
}

TEST_CASE("autocorrelation matches the defining integral") {
  auto t = make_gaussian_pulse(kA);
  FrequencyBand band(3.0 / kA);
  for (double tau : {0.0, 0.001, 0.004, -0.007, 0.02}) {
    auto f = [tau](double w) { return std::pow(oracle::gaussian_spectrum(kA, w), 2) * std::cos(w * tau); };
    double want = oracle::simpson_fixed(f, band.lo(), band.hi(), 20000) / (2.0 * oracle::pi);
    auto got = autocorrelation(t, band, tau);
    CHECK(std::abs(got.real() - want) < 1e-9);
    CHECK(std::abs(got.imag()) < 1e-9);
  }

  // Flat sub-band: R(tau) = L^2 (hi - lo)/(2 pi) sinc((hi - lo) tau / 2) e^{i (hi + lo) tau / 2}.
  FrequencyBand wide(200.0);
  auto flat = make_flat_band(1.5, wide, std::pair{-50.0, 150.0});
  for (double tau : {0.0, 0.01, 0.05, -0.3}) {
    double mag = 1.5 * 1.5 * 200.0 / (2.0 * oracle::pi) * oracle::sinc(100.0 * tau);
    oracle::complex want = mag * oracle::complex{std::cos(50.0 * tau), std::sin(50.0 * tau)};
    CHECK(std::abs(autocorrelation(flat, wide, tau) - want) < 1e-9 * 95.5);
  }
}

TEST_CASE("autocorrelation curve agrees with pointwise evaluation and peaks at zero") {
  auto t = make_custom({-100.0, -10.0, 0.0, 30.0, 100.0}, {0.1, 1.0, 3.0, 0.5, 0.2});
  FrequencyBand band(100.0);
  std::vector<double> taus;
  for (int i = 0; i < 1000; ++i) {
    taus.push_back(-1.0 + 2.0 * i / 999.0);
  }
  auto curve = autocorrelation_curve(t, band, taus);
  double r0 = autocorrelation(t, band, 0.0).real();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    CHECK(std::abs(curve[i]) <= r0 * (1.0 + 1e-12));
    if (i % 97 == 0) {
      CHECK(std::abs(curve[i] - autocorrelation(t, band, taus[i])) < 1e-12 * r0);
    }
  }
}

TEST_CASE("lobe profile") {
  SUBCASE("gaussian beyond 3a") {
    auto t = make_gaussian_pulse(kA);
    FrequencyBand band(3.0 / kA);
    double a1 = lobe_profile(t, band, 3.0 * kA, LobeScan{0.1, 0.0}, QuadratureSpec{8192});
    CHECK(std::abs(a1 - 0.1054) < 1e-3);
  }
  SUBCASE("flat beyond the second zero") {
    FrequencyBand band(100.0);
    auto t = make_flat_band(1.0, band);
    double alpha2 = 2.0 * oracle::pi / band.omega_max();
    double a1 = lobe_profile(t, band, alpha2, LobeScan{1.0, 0.0}, QuadratureSpec{8192});
    // Dense scan of |sinc| past 2 pi: the third lobe, 0.12837.
    double want = 0.0;
    for (double x = 2.0 * oracle::pi; x < 100.0; x += 1e-4) {
      want = std::max(want, std::abs(oracle::sinc(x)));
    }
    CHECK(a1 <= 0.217);
    CHECK(std::abs(a1 - want) < 1e-4);
    CHECK(std::abs(a1 - 0.12837) < 1e-4);
  }
  SUBCASE("tiny alpha2 approaches the peak") {
    FrequencyBand band(100.0);
    auto t = make_flat_band(1.0, band);
    CHECK(lobe_profile(t, band, 1e-6, LobeScan{0.5, 1e-6}, QuadratureSpec{4096}) > 0.999);
  }
  SUBCASE("invalid scans") {
    FrequencyBand band(100.0);
    auto t = make_flat_band(1.0, band);
    CHECK_THROWS_AS(lobe_profile(t, band, 0.0, LobeScan{1.0, 0.0}), InvalidParameter);
    CHECK_THROWS_AS(lobe_profile(t, band, 2.0, LobeScan{1.0, 0.0}), InvalidParameter);
  }
}

TEST_CASE("template construction errors and cases") {
  FrequencyBand band(10.0);
  CHECK_THROWS_AS(make_gaussian_pulse(0.0), InvalidParameter);
  CHECK_THROWS_AS(make_gaussian_pulse(-1.0), InvalidParameter);
  CHECK_THROWS_AS(make_flat_band(0.0, band), InvalidParameter);
  CHECK_THROWS_AS(make_flat_band(1.0, band, std::pair{-20.0, 5.0}), InvalidParameter);
  CHECK_THROWS_AS(make_flat_band(1.0, band, std::pair{3.0, 3.0}), InvalidParameter);
  CHECK_THROWS_AS(make_custom({0.0, 0.0}, {1.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(make_custom({0.0}, {1.0}), InvalidParameter);
  CHECK_THROWS_AS(make_custom({0.0, 1.0}, {1.0, -1.0}), InvalidParameter);
  CHECK_THROWS_AS(make_custom({-1.0, 2.0}, {1.0, 1.0}, SignalCase::Real), InvalidParameter);
  CHECK_THROWS_AS(FrequencyBand(0.0), InvalidParameter);
  CHECK_THROWS_AS(SearchWindow(1.0, 1.0), InvalidParameter);

  CHECK(make_flat_band(1.0, band).is_real());
  CHECK_FALSE(make_flat_band(1.0, band, std::pair{0.0, 5.0}).is_real());
  CHECK(make_custom({-1.0, 0.0, 1.0}, {1.0, 2.0, 1.0}, SignalCase::Real).is_real());
  CHECK(make_custom({-1.0, 1.0}, {1.0, 1.0}).approximate());

  // Energy entirely outside the band.
  auto outside = make_custom({50.0, 60.0}, {1.0, 1.0});
  CHECK_THROWS_AS(compute_metrics(outside, band), ZeroEnergy);
}
