#include "cmf/tone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cmf/errors.hpp"

namespace cmf {

namespace {

constexpr double kPi = std::numbers::pi;

double tone_scale(const ToneMeasurements& meas) {
  return 2.0 * kPi * meas.window.length() / static_cast<double>(meas.m());
}

// X, dX/domega and d2X/domega2 at one frequency.
struct ProcessDerivs {
  complex x;
  complex dx;
  complex d2x;
};

ProcessDerivs tone_process_derivs(const ToneMeasurements& meas, double omega) {
  ProcessDerivs d{};
  for (std::size_t k = 0; k < meas.m(); ++k) {
    double t = meas.times[k];
    complex term = meas.y[k] * std::polar(1.0, -omega * t);
    d.x += term;
    d.dx += complex{0.0, -t} * term;
    d.d2x += -t * t * term;
  }
  return d;
}

double golden_maximize(const ToneMeasurements& meas, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = tone_objective(meas, c);
  double fd = tone_objective(meas, d);
  for (int iter = 0; iter < 400 && (b - a) > tol; ++iter) {
    double width = b - a;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = tone_objective(meas, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = tone_objective(meas, d);
    }
    if (!std::isfinite(fc) || !std::isfinite(fd)) {
      throw NumericError("tone objective is not finite");
    }
    if (!(b - a < width)) {
      break;  // interval no longer shrinks in floating point
    }
  }
  return 0.5 * (a + b);
}

// Newton on d|X|^2/domega = 2 Re(conj(X) X'). Only steps that stay inside
// [lo, hi], see negative curvature and do not lower the objective beyond
// rounding are taken.
double newton_polish(const ToneMeasurements& meas, double omega, double lo, double hi, double max_step) {
  double f = tone_objective(meas, omega);
  for (int iter = 0; iter < 6; ++iter) {
    auto d = tone_process_derivs(meas, omega);
    double g = 2.0 * (std::conj(d.x) * d.dx).real();
    double h = 2.0 * (std::norm(d.dx) + (std::conj(d.x) * d.d2x).real());
    if (!(h < 0.0)) {
      break;
    }
    double step = -g / h;
    if (!std::isfinite(step) || std::abs(step) > max_step) {
      break;
    }
    double next = omega + step;
    if (next < lo || next > hi) {
      break;
    }
    double fn = tone_objective(meas, next);
    if (fn < f * (1.0 - 1e-12)) {
      break;
    }
    omega = next;
    f = std::max(f, fn);
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(omega))) {
      break;
    }
  }
  return omega;
}

}  // namespace

complex tone_process(const ToneMeasurements& meas, double omega) {
  complex x{0.0, 0.0};
  for (std::size_t k = 0; k < meas.m(); ++k) {
    x += meas.y[k] * std::polar(1.0, -omega * meas.times[k]);
  }
  return x;
}

ToneTrace tone_acf_estimate(const ToneMeasurements& meas, std::span<const double> grid) {
  if (grid.empty()) {
    throw InvalidParameter("tone grid is empty");
  }
  ToneTrace tr;
  tr.omegas.assign(grid.begin(), grid.end());
  tr.scale = tone_scale(meas);
  tr.values.reserve(grid.size());
  for (double w : grid) {
    tr.values.push_back(tr.scale * tone_process(meas, w));
  }
  return tr;
}

double tone_autocorrelation(double omega, double window_length) {
  double x = 0.5 * window_length * omega;
  double sinc = (x == 0.0) ? 1.0 : std::sin(x) / x;
  return 2.0 * kPi * window_length * sinc;
}

std::vector<double> nyquist_grid(const FrequencyBand& band, const SearchWindow& window) {
  const double spacing = 2.0 * kPi / window.length();
  auto intervals = static_cast<std::size_t>(std::ceil(band.width() / spacing - 1e-12));
  intervals = std::max<std::size_t>(intervals, 1);
  std::vector<double> grid;
  grid.reserve(intervals + 1);
  for (std::size_t k = 0; k < intervals; ++k) {
    grid.push_back(band.lo() + spacing * static_cast<double>(k));
  }
  grid.push_back(band.hi());
  return grid;
}

double tone_objective(const ToneMeasurements& meas, double omega) {
  return std::norm(tone_scale(meas) * tone_process(meas, omega));
}

double concave_refine(const ToneMeasurements& meas, double omega_start, double radius, double tol) {
  if (!(tol > 0.0)) {
    throw InvalidParameter("ascent tolerance must be positive");
  }
  const double concavity_radius = kPi / (2.0 * meas.window.length());
  if (!(radius >= 0.0) || radius > concavity_radius * (1.0 + 1e-12)) {
    throw InvalidParameter("ascent radius must lie in [0, pi / (2 |T|)]");
  }
  if (radius == 0.0) {
    return omega_start;
  }
  const double lo = omega_start - radius;
  const double hi = omega_start + radius;
  double omega = golden_maximize(meas, lo, hi, tol);
  return newton_polish(meas, omega, lo, hi, 1e-2 * radius);
}

double default_tone_tolerance(const SearchWindow& window) { return 1e-12 * (2.0 * kPi / window.length()); }

ToneEstimate estimate_tone(const ToneMeasurements& meas, const FrequencyBand& band) {
  return estimate_tone(meas, band, default_tone_tolerance(meas.window));
}

ToneEstimate estimate_tone(const ToneMeasurements& meas, const FrequencyBand& band, double tol) {
  const double len = meas.window.length();
  auto grid = nyquist_grid(band, meas.window);
  auto trace = tone_acf_estimate(meas, grid);

  ToneEstimate est;
  double best_grid = -1.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    double v = std::abs(trace.values[i]);
    if (v > best_grid) {
      best_grid = v;
      est.grid_point = trace.omegas[i];
    }
  }

  const double r = kPi / (2.0 * len);
  const std::array<double, 4> offsets{-3.0 * r, -r, r, 3.0 * r};
  double best_obj = -1.0;
  double best_omega = est.grid_point;
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    double start = est.grid_point + offsets[j];
    double a = std::max(band.lo(), start - r);
    double b = std::min(band.hi(), start + r);
    if (a > b) {
      est.ascent_starts[j] = std::clamp(start, band.lo(), band.hi());
      continue;
    }
    double center = 0.5 * (a + b);
    est.ascent_starts[j] = center;
    double omega = concave_refine(meas, center, 0.5 * (b - a), tol);
    double obj = tone_objective(meas, omega);
    if (obj > best_obj || (obj == best_obj && omega < best_omega)) {
      best_obj = obj;
      best_omega = omega;
    }
  }
  est.omega_hat = best_omega;
  est.amplitude_hat = tone_process(meas, est.omega_hat) / static_cast<double>(meas.m());
  return est;
}

ToneMeasurements dechirp(std::span<const double> times, std::span<const complex> samples, const ChirpSpec& chirp,
                         const SearchWindow& window) {
  if (times.size() != samples.size() || times.empty()) {
    throw InvalidParameter("dechirp needs matching, nonempty time and sample arrays");
  }
  ToneMeasurements out{{times.begin(), times.end()}, {}, window, std::numeric_limits<double>::quiet_NaN(), {}};
  out.y.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    double t = times[k];
    out.y[k] = samples[k] * std::polar(1.0, -(chirp.omega_c * t + 0.5 * chirp.alpha * t * t));
  }
  return out;
}

std::vector<complex> chirp_samples(const ChirpSpec& chirp, std::span<const double> times, double sigma_n,
                                   const RngSpec& rng) {
  if (!(sigma_n >= 0.0)) {
    throw InvalidParameter("sigma_n must be nonnegative");
  }
  std::vector<complex> x(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    double d = times[k] - chirp.t0;
    x[k] = chirp.amplitude * std::polar(1.0, chirp.omega_c * d + 0.5 * chirp.alpha * d * d);
  }
  if (sigma_n > 0.0) {
    auto n = unit_noise(x.size(), rng);
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] += sigma_n * n[k];
    }
  }
  return x;
}

double estimate_chirp_toa(std::span<const double> times, std::span<const complex> samples, double omega_c,
                          double alpha, const FrequencyBand& band, const SearchWindow& window, double tol) {
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw InvalidParameter("chirp rate alpha must be nonzero");
  }
  auto tone = dechirp(times, samples, ChirpSpec{omega_c, alpha, 0.0, {1.0, 0.0}}, window);
  return -estimate_tone(tone, band, tol).omega_hat / alpha;
}

}  // namespace cmf
