#include "cmf/sampling.hpp"

#include <cmath>
#include <numbers>

#include "cmf/errors.hpp"

namespace cmf {

namespace {

std::vector<double> draw_uniform(double lo, double hi, std::size_t m, const RngSpec& rng) {
  if (m == 0) {
    throw InvalidParameter("sample count m must be at least 1");
  }
  CounterRng gen(rng, StreamPurpose::Locations);
  std::vector<double> out(m);
  for (auto& v : out) {
    v = gen.uniform(lo, hi);
  }
  return out;
}

void check_sigma(double sigma_n) {
  if (!(sigma_n >= 0.0) || !std::isfinite(sigma_n)) {
    throw InvalidParameter("sigma_n must be finite and nonnegative");
  }
}

}  // namespace

std::vector<double> draw_frequencies(const FrequencyBand& band, std::size_t m, const RngSpec& rng) {
  return draw_uniform(band.lo(), band.hi(), m, rng);
}

std::vector<double> draw_times(const SearchWindow& window, std::size_t m, const RngSpec& rng) {
  return draw_uniform(window.tau_min(), window.tau_max(), m, rng);
}

std::vector<complex> unit_noise(std::size_t m, const RngSpec& rng) {
  CounterRng gen(rng, StreamPurpose::Noise);
  const double s = std::numbers::sqrt2 / 2.0;
  std::vector<complex> out(m);
  for (auto& v : out) {
    auto [re, im] = gen.normal_pair();
    v = {s * re, s * im};
  }
  return out;
}

DelayMeasurements synthesize_delay_measurements(const Template& t, const DelayScene& scene,
                                                const FrequencyBand& band, std::vector<double> freqs,
                                                const RngSpec& rng) {
  check_sigma(scene.sigma_n);
  if (t.is_real() && scene.amplitude.imag() != 0.0) {
    throw InvalidParameter("real-case scenes need a real amplitude");
  }
  if (freqs.empty()) {
    throw InvalidParameter("sample count m must be at least 1");
  }
  for (double w : freqs) {
    if (!band.contains(w)) {
      throw InvalidParameter("sample frequency outside the observation band");
    }
  }
  DelayMeasurements out{std::move(freqs), {}, band, rng};
  out.y.resize(out.freqs.size());
  for (std::size_t k = 0; k < out.freqs.size(); ++k) {
    double w = out.freqs[k];
    out.y[k] = scene.amplitude * std::polar(1.0, -w * scene.tau0) * t.spectrum(w);
  }
  if (scene.sigma_n > 0.0) {
    auto n = unit_noise(out.y.size(), rng);
    for (std::size_t k = 0; k < n.size(); ++k) {
      out.y[k] += scene.sigma_n * n[k];
    }
  }
  return out;
}

ToneMeasurements synthesize_tone_measurements(double omega0, complex amplitude, double sigma_n,
                                              const SearchWindow& window, std::vector<double> times,
                                              const RngSpec& rng) {
  check_sigma(sigma_n);
  if (times.empty()) {
    throw InvalidParameter("sample count m must be at least 1");
  }
  for (double t : times) {
    if (!window.contains(t)) {
      throw InvalidParameter("sample time outside the observation window");
    }
  }
  ToneMeasurements out{std::move(times), {}, window, omega0, rng};
  out.y.resize(out.times.size());
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    out.y[k] = amplitude * std::polar(1.0, omega0 * out.times[k]);
  }
  if (sigma_n > 0.0) {
    auto n = unit_noise(out.y.size(), rng);
    for (std::size_t k = 0; k < n.size(); ++k) {
      out.y[k] += sigma_n * n[k];
    }
  }
  return out;
}

}  // namespace cmf
