#pragma once

// The compressive matched filter for the delay problem: correlation of the
// observations with delayed test vectors, its rescaling into an estimate of
// the shifted autocorrelation, and the least-squares delay/amplitude fit.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cmf/sampling.hpp"
#include "cmf/templates.hpp"

namespace cmf {

/// Evenly spaced points lo + (hi - lo) i / (count - 1), i = 0..count-1.
struct UniformGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;

  /// Grid from lo to hi whose spacing is the largest value <= step that
  /// divides hi - lo evenly. Both endpoints are grid points.
  static UniformGrid spanning(double lo, double hi, double step);

  double at(std::size_t i) const;
  double step() const;
  std::vector<double> points() const;
};

struct CorrelationTrace {
  std::vector<double> taus;
  std::vector<complex> values;  // imaginary parts are exactly 0 in the Real case
  double scale = 0.0;           // |Omega| / (2 pi m)
  SignalCase signal_case = SignalCase::Complex;

  std::size_t size() const { return taus.size(); }
};

struct GridPeak {
  std::size_t index = 0;
  double tau = 0.0;
  double magnitude = 0.0;
};

struct DelayEstimate {
  double tau_hat = 0.0;
  complex amplitude_hat;  // real in the Real case
  double peak_value = 0.0;
  std::optional<double> runner_up_gap;
};

/// psi_tau[k] = e^{-i omega_k tau} s(omega_k).
complex test_vector_entry(double omega_k, double tau, const Template& t);

/// X(tau) = <y, psi_tau> = sum_k y[k] conj(psi_tau[k]).
complex correlation_process(const DelayMeasurements& meas, const Template& t, double tau);

/// Rescaled correlation (|Omega|/2 pi m) X(tau), real part only in the Real
/// case. Evaluates every grid point with its own sincos.
CorrelationTrace acf_estimate(const DelayMeasurements& meas, const Template& t, std::span<const double> grid);

/// Same values on a uniform grid, advancing each sample's phasor by rotation
/// and resynchronising periodically. Agrees with the generic overload to
/// ~1e-13 relative.
CorrelationTrace acf_estimate(const DelayMeasurements& meas, const Template& t, const UniformGrid& grid);

/// Index of the largest |value|; ties go to the smallest tau.
GridPeak grid_search(const CorrelationTrace& trace);

/// min(alpha2 / 4, 1 / (4 |Omega|)), or 1 / (4 |Omega|) without alpha2.
double default_grid_step(const FrequencyBand& band, std::optional<double> alpha2 = std::nullopt);

/// Largest |value| outside [tau_hat - radius, tau_hat + radius], subtracted
/// from the peak. nullopt when every grid point is inside the exclusion zone.
std::optional<double> runner_up_gap(const CorrelationTrace& trace, const GridPeak& peak, double radius);

/// Least-squares amplitude for a given delay. Throws DegenerateMeasurement
/// when ||psi_tau|| = 0.
complex amplitude_estimate(const DelayMeasurements& meas, const Template& t, double tau);

/// Grid search over {tau_min, tau_min + step, ..., tau_max} followed by the
/// closed-form amplitude.
DelayEstimate estimate_delay_amplitude(const DelayMeasurements& meas, const Template& t,
                                       const SearchWindow& window, double grid_step,
                                       std::optional<double> alpha2 = std::nullopt);

/// Finishes an estimate from a trace that was already computed.
DelayEstimate estimate_from_trace(const CorrelationTrace& trace, const DelayMeasurements& meas,
                                  const Template& t, std::optional<double> alpha2 = std::nullopt);

/// Mean function A R_ss(tau - tau0) at every grid point (real part only in
/// the Real case).
std::vector<complex> mean_function(const Template& t, const FrequencyBand& band, complex amplitude, double tau0,
                                   std::span<const double> taus, const QuadratureSpec& quad = {});

/// max_i |trace[i] - mean[i]|. A grid maximum, so a lower bound on the sup.
double deviation_supremum(const CorrelationTrace& trace, std::span<const complex> mean);

/// Convenience form: builds the fine grid over `window` and the mean
/// function, then takes the grid maximum of the deviation.
double deviation_supremum(const DelayMeasurements& meas, const Template& t, const DelayScene& truth,
                          const SearchWindow& window, double fine_grid_step, const QuadratureSpec& quad = {});

}  // namespace cmf
