#include "cmf/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmf/errors.hpp"

namespace cmf {

namespace {

constexpr std::size_t kResyncEvery = 64;

double trace_scale(const DelayMeasurements& meas) {
  return meas.band.width() / (2.0 * std::numbers::pi * static_cast<double>(meas.m()));
}

// Real case keeps Re X only.
complex fold_case(complex x, SignalCase c) { return c == SignalCase::Real ? complex{x.real(), 0.0} : x; }

}  // namespace

UniformGrid UniformGrid::spanning(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidParameter("grid step must be positive");
  }
  if (!(hi > lo)) {
    throw InvalidParameter("grid needs hi > lo");
  }
  double intervals = std::ceil((hi - lo) / step - 1e-9);
  return {lo, hi, static_cast<std::size_t>(std::max(1.0, intervals)) + 1};
}

double UniformGrid::at(std::size_t i) const {
  if (i + 1 == count) {
    return hi;
  }
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

double UniformGrid::step() const { return (hi - lo) / static_cast<double>(count - 1); }

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = at(i);
  }
  return out;
}

complex test_vector_entry(double omega_k, double tau, const Template& t) {
  return std::polar(1.0, -omega_k * tau) * t.spectrum(omega_k);
}

complex correlation_process(const DelayMeasurements& meas, const Template& t, double tau) {
  complex x{0.0, 0.0};
  for (std::size_t k = 0; k < meas.m(); ++k) {
    x += meas.y[k] * std::conj(test_vector_entry(meas.freqs[k], tau, t));
  }
  return x;
}

CorrelationTrace acf_estimate(const DelayMeasurements& meas, const Template& t, std::span<const double> grid) {
  if (grid.empty()) {
    throw InvalidParameter("correlation grid is empty");
  }
  CorrelationTrace tr;
  tr.taus.assign(grid.begin(), grid.end());
  tr.scale = trace_scale(meas);
  tr.signal_case = t.signal_case();
  tr.values.reserve(grid.size());
  for (double tau : grid) {
    tr.values.push_back(fold_case(tr.scale * correlation_process(meas, t, tau), tr.signal_case));
  }
  return tr;
}

CorrelationTrace acf_estimate(const DelayMeasurements& meas, const Template& t, const UniformGrid& grid) {
  if (grid.count < 2) {
    throw InvalidParameter("correlation grid needs at least two points");
  }
  const std::size_t m = meas.m();
  const double h = grid.step();
  // X(tau) = sum_k c_k e^{i omega_k tau} with c_k = y_k conj(s(omega_k)).
  std::vector<double> cr(m), ci(m), pr(m), pi(m), rr(m), ri(m);
  for (std::size_t k = 0; k < m; ++k) {
    complex c = meas.y[k] * std::conj(t.spectrum(meas.freqs[k]));
    cr[k] = c.real();
    ci[k] = c.imag();
    rr[k] = std::cos(meas.freqs[k] * h);
    ri[k] = std::sin(meas.freqs[k] * h);
  }
  CorrelationTrace tr;
  tr.taus = grid.points();
  tr.scale = trace_scale(meas);
  tr.signal_case = t.signal_case();
  tr.values.resize(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    if (i % kResyncEvery == 0) {
      for (std::size_t k = 0; k < m; ++k) {
        double phase = meas.freqs[k] * tr.taus[i];
        pr[k] = std::cos(phase);
        pi[k] = std::sin(phase);
      }
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      re += cr[k] * pr[k] - ci[k] * pi[k];
      im += cr[k] * pi[k] + ci[k] * pr[k];
      double npr = pr[k] * rr[k] - pi[k] * ri[k];
      pi[k] = pr[k] * ri[k] + pi[k] * rr[k];
      pr[k] = npr;
    }
    tr.values[i] = fold_case(tr.scale * complex{re, im}, tr.signal_case);
  }
  return tr;
}

GridPeak grid_search(const CorrelationTrace& trace) {
  if (trace.values.empty()) {
    throw InvalidParameter("cannot search an empty trace");
  }
  GridPeak best{0, trace.taus[0], std::abs(trace.values[0])};
  for (std::size_t i = 1; i < trace.size(); ++i) {
    double v = std::abs(trace.values[i]);
    if (v > best.magnitude) {
      best = {i, trace.taus[i], v};
    }
  }
  return best;
}

double default_grid_step(const FrequencyBand& band, std::optional<double> alpha2) {
  double step = 1.0 / (4.0 * band.width());
  if (alpha2) {
    step = std::min(*alpha2 / 4.0, step);
  }
  return step;
}

std::optional<double> runner_up_gap(const CorrelationTrace& trace, const GridPeak& peak, double radius) {
  std::optional<double> outside;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (std::abs(trace.taus[i] - peak.tau) > radius) {
      double v = std::abs(trace.values[i]);
      outside = outside ? std::max(*outside, v) : v;
    }
  }
  if (!outside) {
    return std::nullopt;
  }
  return peak.magnitude - *outside;
}

complex amplitude_estimate(const DelayMeasurements& meas, const Template& t, double tau) {
  double energy = 0.0;
  for (double w : meas.freqs) {
    energy += std::norm(t.spectrum(w));
  }
  if (!(energy > 0.0)) {
    throw DegenerateMeasurement("test vector has zero norm: no sample hit the template support");
  }
  complex x = correlation_process(meas, t, tau);
  return fold_case(x, t.signal_case()) / energy;
}

DelayEstimate estimate_from_trace(const CorrelationTrace& trace, const DelayMeasurements& meas, const Template& t,
                                  std::optional<double> alpha2) {
  GridPeak peak = grid_search(trace);
  DelayEstimate est;
  est.tau_hat = peak.tau;
  est.amplitude_hat = amplitude_estimate(meas, t, peak.tau);
  est.peak_value = peak.magnitude;
  if (alpha2) {
    est.runner_up_gap = runner_up_gap(trace, peak, *alpha2);
  }
  return est;
}

DelayEstimate estimate_delay_amplitude(const DelayMeasurements& meas, const Template& t, const SearchWindow& window,
                                       double grid_step, std::optional<double> alpha2) {
  auto grid = UniformGrid::spanning(window.tau_min(), window.tau_max(), grid_step);
  return estimate_from_trace(acf_estimate(meas, t, grid), meas, t, alpha2);
}

std::vector<complex> mean_function(const Template& t, const FrequencyBand& band, complex amplitude, double tau0,
                                   std::span<const double> taus, const QuadratureSpec& quad) {
  std::vector<double> lags(taus.size());
  std::transform(taus.begin(), taus.end(), lags.begin(), [tau0](double tau) { return tau - tau0; });
  auto r = autocorrelation_curve(t, band, lags, quad);
  for (auto& v : r) {
    v = fold_case(amplitude * v, t.signal_case());
  }
  return r;
}

double deviation_supremum(const CorrelationTrace& trace, std::span<const complex> mean) {
  if (mean.size() != trace.size()) {
    throw InvalidParameter("mean function and trace sizes differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    worst = std::max(worst, std::abs(trace.values[i] - mean[i]));
  }
  return worst;
}

double deviation_supremum(const DelayMeasurements& meas, const Template& t, const DelayScene& truth,
                          const SearchWindow& window, double fine_grid_step, const QuadratureSpec& quad) {
  auto grid = UniformGrid::spanning(window.tau_min(), window.tau_max(), fine_grid_step);
  auto trace = acf_estimate(meas, t, grid);
  auto mean = mean_function(t, meas.band, truth.amplitude, truth.tau0, trace.taus, quad);
  return deviation_supremum(trace, mean);
}

}  // namespace cmf
