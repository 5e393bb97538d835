#include "cmf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cmf/errors.hpp"

namespace cmf {

namespace {

constexpr double kPi = std::numbers::pi;

double require_omega_t(const ProblemConfig& cfg) {
  double ot = cfg.omega_t();
  if (!(ot >= 3.0)) {
    throw PreconditionError("bounds require |Omega| |T| >= 3");
  }
  return ot;
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidParameter("delta must lie in (0, 1)");
  }
}

void require_m(const ProblemConfig& cfg) {
  if (cfg.m == 0) {
    throw InvalidParameter("m must be at least 1");
  }
}

void require_alpha1(double alpha1) {
  if (!(alpha1 >= 0.0 && alpha1 < 1.0)) {
    throw InvalidParameter("alpha1 must lie in [0, 1)");
  }
}

double sqrt_m(const ProblemConfig& cfg) { return std::sqrt(static_cast<double>(cfg.m)); }

// Smallest integer strictly above x.
double strictly_above(double x) {
  if (!std::isfinite(x)) {
    return std::numeric_limits<double>::infinity();
  }
  return std::floor(std::max(x, 0.0)) + 1.0;
}

// sqrt(|Omega|) ||s||_2 / sqrt(m).
double noise_scale(const ProblemConfig& cfg) {
  return std::sqrt(cfg.band.width()) * cfg.metrics.l2() / sqrt_m(cfg);
}

}  // namespace

const Constants& Constants::standard() {
  static const Constants k = [] {
    Constants c{};
    c.c1 = 18.02;
    c.c2 = std::max(4.0 * c.c1 * c.c1, 2.0 * c.c1);
    c.c3 = (1.0 + std::sqrt(3.0)) * (1.0 + std::sqrt(3.0));
    c.c4 = 2.25 * std::numbers::sqrt2 / kPi;
    c.c5 = std::max({16.0 * c.c1 * c.c1, 4.0 * c.c1, 64.0 * kPi * kPi * c.c4 * c.c4});
    return c;
  }();
  return k;
}

SpectralMetrics flat_metrics(const FrequencyBand& band) {
  SpectralMetrics s;
  s.band_width = band.width();
  s.l2sq = band.width();
  s.l4_4 = band.width();
  s.linf_sq = 1.0;
  s.mu1 = 1.0;
  s.mu2 = 1.0;
  return s;
}

ProblemConfig make_problem(const Template& t, const FrequencyBand& band, const SearchWindow& window,
                           std::size_t m, double delta, double amp, double sigma_n, double alpha2,
                           double epsilon, const QuadratureSpec& quad) {
  ProblemConfig cfg;
  cfg.m = m;
  cfg.delta = delta;
  cfg.metrics = compute_metrics(t, band, quad);
  cfg.band = band;
  cfg.window = window;
  cfg.amp = amp;
  cfg.sigma_n = sigma_n;
  cfg.lobe.alpha2 = alpha2;
  cfg.lobe.alpha1 = lobe_profile(t, band, alpha2, LobeScan::over(window), quad);
  cfg.lobe.epsilon = epsilon;
  return cfg;
}

ExpectedSupBound expected_sup_bound(const ProblemConfig& cfg) {
  double ot = require_omega_t(cfg);
  require_m(cfg);
  double base = cfg.eta() * cfg.metrics.mu1 / sqrt_m(cfg);
  double root = std::sqrt(std::log(2.0 * ot));
  return {base * (4.25 * root + 2.28), 5.96 * base * root};
}

double TailThreshold::tightest() const { return std::min(c1_form, refined); }

TailThreshold tail_threshold_U(const ProblemConfig& cfg) {
  double ot = require_omega_t(cfg);
  require_delta(cfg.delta);
  require_m(cfg);
  double m = static_cast<double>(cfg.m);
  double eta = cfg.eta();
  double prefactor =
      std::max(eta * cfg.metrics.mu1 / std::sqrt(m), eta * cfg.metrics.mu2 / m * std::sqrt(std::log(4.0 / cfg.delta)));
  double root = std::sqrt(std::log(12.0 * ot / cfg.delta));
  return {Constants::standard().c1 * prefactor * root, prefactor * (15.61 * root + 4.56)};
}

NoiseSupBound noise_expected_sup_bound(const ProblemConfig& cfg) {
  double ot = require_omega_t(cfg);
  require_m(cfg);
  double base = cfg.sigma_n * noise_scale(cfg);
  double root = std::sqrt(std::log(ot));
  return {base * (0.199 * root + 0.166), 0.36 * base * root};
}

NoiseTailThreshold noise_tail_threshold(const ProblemConfig& cfg) {
  double ot = require_omega_t(cfg);
  require_delta(cfg.delta);
  require_m(cfg);
  const auto& k = Constants::standard();
  NoiseTailThreshold out;
  double branch = std::max(std::sqrt(std::log(ot)), std::sqrt(std::log(2.0 / cfg.delta)));
  out.threshold = k.c4 * cfg.sigma_n * noise_scale(cfg) * branch;
  double mu1 = cfg.metrics.mu1;
  out.activation_m = k.c3 * std::max(mu1 * mu1, cfg.metrics.mu2) * std::log(1.0 / cfg.delta);
  out.activated = static_cast<double>(cfg.m) >= out.activation_m;
  return out;
}

MinSamples min_samples_noiseless(const ProblemConfig& cfg) {
  double ot = require_omega_t(cfg);
  require_delta(cfg.delta);
  require_alpha1(cfg.lobe.alpha1);
  double gap = 1.0 - cfg.lobe.alpha1 - cfg.lobe.epsilon;
  if (!(cfg.lobe.epsilon >= 0.0) || !(gap > 0.0)) {
    throw InvalidParameter("epsilon must lie in [0, 1 - alpha1)");
  }
  const auto& k = Constants::standard();
  double l12 = std::log(12.0 * ot / cfg.delta);
  double mu1 = cfg.metrics.mu1;
  double first = l12 / (gap * gap) * mu1 * mu1;
  double second = std::sqrt(std::log(4.0 / cfg.delta) * l12) / gap * cfg.metrics.mu2;
  return {strictly_above(k.c2 * std::max(first, second)),
          strictly_above(std::max(4.0 * k.c1 * k.c1 * first, 2.0 * k.c1 * second))};
}

NoisyMinSamples min_samples_noisy(const ProblemConfig& cfg) {
  double ot = require_omega_t(cfg);
  require_delta(cfg.delta);
  require_alpha1(cfg.lobe.alpha1);
  if (!(cfg.amp > 0.0)) {
    throw InvalidParameter("|A| must be positive");
  }
  if (!(cfg.sigma_n >= 0.0)) {
    throw InvalidParameter("sigma_n must be nonnegative");
  }
  if (!(cfg.metrics.l2sq > 0.0)) {
    throw InvalidParameter("template energy must be positive");
  }
  const auto& k = Constants::standard();
  double gap = 1.0 - cfg.lobe.alpha1;
  double l12 = std::log(12.0 * ot / cfg.delta);
  double mu1 = cfg.metrics.mu1;
  double first = l12 / (gap * gap) * mu1 * mu1;
  double second = std::sqrt(std::log(4.0 / cfg.delta) * l12) / gap * cfg.metrics.mu2;
  double snr_term = cfg.sigma_n * cfg.sigma_n * cfg.band.width() / (cfg.amp * cfg.amp * cfg.metrics.l2sq);
  double third = std::max(std::log(ot), std::log(2.0 / cfg.delta)) / (gap * gap) * snr_term;

  NoisyMinSamples out;
  out.activation = std::ceil(k.c3 * std::max(mu1 * mu1, cfg.metrics.mu2) * std::log(1.0 / cfg.delta));
  double combined = strictly_above(k.c5 * std::max({first, second, third}));
  double split = strictly_above(
      std::max({16.0 * k.c1 * k.c1 * first, 4.0 * k.c1 * second, 64.0 * kPi * kPi * k.c4 * k.c4 * third}));
  out.combined = std::max(combined, out.activation);
  out.split = std::max(split, out.activation);
  return out;
}

NoisyMinSamples min_samples_tone(const FrequencyBand& band, const SearchWindow& window, double delta, double amp,
                                 double sigma_n) {
  ProblemConfig cfg;
  cfg.delta = delta;
  cfg.metrics = flat_metrics(band);
  cfg.band = band;
  cfg.window = window;
  cfg.amp = amp;
  cfg.sigma_n = sigma_n;
  cfg.lobe.alpha1 = kToneSidelobe;
  return min_samples_noisy(cfg);
}

double tone_tail_threshold(const ProblemConfig& cfg) {
  double ot = require_omega_t(cfg);
  require_delta(cfg.delta);
  require_m(cfg);
  double m = static_cast<double>(cfg.m);
  double prefactor = std::max(1.0 / std::sqrt(m), std::sqrt(std::log(4.0 / cfg.delta)) / m);
  return 2.0 * kPi * Constants::standard().c1 * cfg.amp * cfg.window.length() * prefactor *
         std::sqrt(std::log(12.0 * ot / cfg.delta));
}

double min_samples_tone_grid(const ProblemConfig& cfg) {
  double ot = require_omega_t(cfg);
  require_delta(cfg.delta);
  double gap = kToneMainlobe - kToneSidelobe;
  double l12 = std::log(12.0 * ot / cfg.delta);
  double x = Constants::standard().c2 * std::max(l12 / (gap * gap), std::sqrt(std::log(4.0 / cfg.delta) * l12) / gap);
  // The displayed condition is m >= x.
  return std::ceil(x);
}

BreakdownSigma breakdown_sigma(const ProblemConfig& cfg) {
  double ot = require_omega_t(cfg);
  BreakdownSigma out;
  out.nyquist = cfg.amp * cfg.metrics.l2();
  out.rough = out.nyquist * std::sqrt(static_cast<double>(cfg.m) / cfg.band.width());
  out.guaranteed = out.rough / std::sqrt(std::log(ot));
  return out;
}

PointwiseBounds pointwise_bounds(const ProblemConfig& cfg) {
  require_m(cfg);
  return {cfg.eta() * cfg.metrics.mu1 / sqrt_m(cfg), cfg.sigma_n * noise_scale(cfg) / (2.0 * kPi)};
}

BoundReport make_report(const ProblemConfig& cfg) {
  BoundReport r;
  r.config = cfg;
  r.theorem1 = expected_sup_bound(cfg);
  r.theorem2 = tail_threshold_U(cfg);
  r.theorem3 = noise_expected_sup_bound(cfg);
  r.theorem4 = noise_tail_threshold(cfg);
  r.corollary1 = min_samples_noiseless(cfg);
  r.corollary5 = min_samples_noisy(cfg);
  r.corollary2_tone_U = tone_tail_threshold(cfg);
  r.tone_grid_min_samples = min_samples_tone_grid(cfg);
  r.corollary4 = min_samples_tone(cfg.band, cfg.window, cfg.delta, cfg.amp, cfg.sigma_n);
  r.breakdown = breakdown_sigma(cfg);
  r.pointwise = pointwise_bounds(cfg);
  return r;
}

}  // namespace cmf
