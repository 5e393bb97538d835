#pragma once

#include <cstddef>
#include <vector>

#include "cmf/rng.hpp"
#include "cmf/templates.hpp"

namespace cmf {

/// Ground truth of one delay experiment.
struct DelayScene {
  complex amplitude{1.0, 0.0};
  double tau0 = 0.0;
  double sigma_n = 0.0;  // std of each complex noise sample (sigma^2/2 per component)
};

struct DelayMeasurements {
  std::vector<double> freqs;
  std::vector<complex> y;
  FrequencyBand band;
  RngSpec seed;

  std::size_t m() const { return freqs.size(); }
};

struct ToneMeasurements {
  std::vector<double> times;
  std::vector<complex> y;
  SearchWindow window;
  double omega0 = 0.0;  // truth, when known
  RngSpec seed;

  std::size_t m() const { return times.size(); }
};

/// m i.i.d. Uniform(-omega_max, omega_max) frequencies from the Locations
/// sub-stream of `rng`.
std::vector<double> draw_frequencies(const FrequencyBand& band, std::size_t m, const RngSpec& rng);

/// m i.i.d. Uniform(tau_min, tau_max) times from the Locations sub-stream.
std::vector<double> draw_times(const SearchWindow& window, std::size_t m, const RngSpec& rng);

/// m circular complex Gaussians with E|n|^2 = 1 from the Noise sub-stream.
/// Sample k uses normal_pair() number k as (re, im), scaled by 1/sqrt(2).
std::vector<complex> unit_noise(std::size_t m, const RngSpec& rng);

/// y[k] = A e^{-i omega_k tau0} s(omega_k) + sigma_n * unit_noise[k].
DelayMeasurements synthesize_delay_measurements(const Template& t, const DelayScene& scene,
                                                const FrequencyBand& band, std::vector<double> freqs,
                                                const RngSpec& rng);

/// y[k] = A e^{i omega0 t_k} + sigma_n * unit_noise[k].
ToneMeasurements synthesize_tone_measurements(double omega0, complex amplitude, double sigma_n,
                                              const SearchWindow& window, std::vector<double> times,
                                              const RngSpec& rng);

}  // namespace cmf
