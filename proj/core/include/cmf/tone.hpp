#pragma once

// Pure-tone frequency estimation from random time samples, and chirp
// time-of-arrival estimation by reduction to a tone.

#include <array>
#include <span>
#include <vector>

#include "cmf/sampling.hpp"
#include "cmf/templates.hpp"

namespace cmf {

struct ToneTrace {
  std::vector<double> omegas;
  std::vector<complex> values;  // (2 pi |T| / m) X(omega)
  double scale = 0.0;

  std::size_t size() const { return omegas.size(); }
};

struct ToneEstimate {
  double omega_hat = 0.0;
  complex amplitude_hat;
  double grid_point = 0.0;  // Nyquist-grid winner before refinement
  std::array<double, 4> ascent_starts{};
};

/// Linear chirp A exp(j(omega_c (t - t0) + alpha/2 (t - t0)^2)).
struct ChirpSpec {
  double omega_c = 0.0;
  double alpha = 0.0;
  double t0 = 0.0;
  complex amplitude{1.0, 0.0};
};

/// X(omega) = sum_k y[k] e^{-i omega t_k}.
complex tone_process(const ToneMeasurements& meas, double omega);

ToneTrace tone_acf_estimate(const ToneMeasurements& meas, std::span<const double> grid);

/// Mean of the rescaled tone process at offset omega: 2 pi |T| sinc(|T| omega / 2).
double tone_autocorrelation(double omega, double window_length);

/// Spacing 2 pi / |T| from -omega_max; the last point is clamped to omega_max,
/// so every frequency in the band is within pi / |T| of a grid point.
std::vector<double> nyquist_grid(const FrequencyBand& band, const SearchWindow& window);

/// |R~(omega)|^2, the objective of the local ascent.
double tone_objective(const ToneMeasurements& meas, double omega);

/// Golden-section maximisation of |R~|^2 on [start - radius, start + radius]
/// down to width `tol`, then Newton steps on the stationarity condition to
/// pin the maximiser below the resolution a comparison of objective values
/// allows. radius must not exceed pi / (2 |T|).
double concave_refine(const ToneMeasurements& meas, double omega_start, double radius, double tol);

/// 1e-12 * (2 pi / |T|).
double default_tone_tolerance(const SearchWindow& window);

/// Nyquist-grid search followed by four local ascents started at
/// g +- pi/(2|T|) and g +- 3pi/(2|T|), each over an interval of radius
/// pi/(2|T|) intersected with the band. Best objective wins, ties to the
/// smallest omega.
ToneEstimate estimate_tone(const ToneMeasurements& meas, const FrequencyBand& band, double tol);
ToneEstimate estimate_tone(const ToneMeasurements& meas, const FrequencyBand& band);

/// x(t_k) exp(-j(omega_c t_k + alpha/2 t_k^2)). For a noiseless chirp this is
/// A~ e^{-j alpha t0 t_k}, a tone at frequency -alpha t0.
ToneMeasurements dechirp(std::span<const double> times, std::span<const complex> samples, const ChirpSpec& chirp,
                         const SearchWindow& window);

/// Noiseless (sigma_n = 0) or noisy chirp samples at the given times.
std::vector<complex> chirp_samples(const ChirpSpec& chirp, std::span<const double> times, double sigma_n,
                                   const RngSpec& rng);

/// Dechirps, estimates the tone and returns t0_hat = -omega_hat / alpha.
/// `band` must contain -alpha t0 for every admissible t0.
double estimate_chirp_toa(std::span<const double> times, std::span<const complex> samples, double omega_c,
                          double alpha, const FrequencyBand& band, const SearchWindow& window, double tol);

}  // namespace cmf
