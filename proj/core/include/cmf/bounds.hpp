#pragma once

// Closed-form evaluation of the explicit expectation bounds, tail thresholds,
// sample-count conditions and breakdown noise levels for the compressive
// matched filter. Everything here is plain arithmetic on a ProblemConfig.

#include <cstddef>
#include <string_view>

#include "cmf/templates.hpp"

namespace cmf {

inline constexpr std::string_view kConstantsVersion = "cmf-constants/1";

struct Constants {
  double c1;
  double c2;  // max(4 C1^2, 2 C1)
  double c3;  // (1 + sqrt 3)^2
  double c4;  // 2.25 sqrt 2 / pi
  double c5;  // max(16 C1^2, 4 C1, 64 pi^2 C4^2)

  static const Constants& standard();
};

/// Lobe constants and gap used by the sample-count conditions.
struct LobeConstants {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double epsilon = 0.0;
};

struct ProblemConfig {
  std::size_t m = 1;
  double delta = 0.1;
  SpectralMetrics metrics;
  FrequencyBand band{1.0};
  SearchWindow window{0.0, 1.0};
  double amp = 1.0;  // |A|
  double sigma_n = 0.0;
  LobeConstants lobe;

  /// |Omega| |T|.
  double omega_t() const { return band.width() * window.length(); }
  /// |A| ||s||_2^2 / (2 pi).
  double eta() const { return metrics.eta(amp); }
};

/// Fills the metrics and alpha1 (from the lobe scan beyond alpha2) of a
/// template. m, delta, amp, sigma_n and epsilon are passed through.
ProblemConfig make_problem(const Template& t, const FrequencyBand& band, const SearchWindow& window,
                           std::size_t m, double delta, double amp, double sigma_n, double alpha2,
                           double epsilon = 0.0, const QuadratureSpec& quad = {});

/// Metrics of a unit flat spectrum on the band: mu1 = mu2 = 1, ||s||_2^2 = |Omega|.
SpectralMetrics flat_metrics(const FrequencyBand& band);

struct ExpectedSupBound {
  double two_term = 0.0;    // (eta mu1 / sqrt m)(4.25 sqrt log(2 Omega T) + 2.28)
  double simplified = 0.0;  // 5.96 (eta mu1 / sqrt m) sqrt log(2 Omega T)
};
ExpectedSupBound expected_sup_bound(const ProblemConfig& cfg);

struct TailThreshold {
  double c1_form = 0.0;
  double refined = 0.0;  // (15.61 sqrt log(12 Omega T / delta) + 4.56) prefactor
  double tightest() const;
};
TailThreshold tail_threshold_U(const ProblemConfig& cfg);

struct NoiseSupBound {
  double two_term = 0.0;    // sigma (sqrt|Omega| ||s|| / sqrt m)(0.199 sqrt log(Omega T) + 0.166)
  double simplified = 0.0;  // 0.36 sigma (sqrt|Omega| ||s|| / sqrt m) sqrt log(Omega T)
};
NoiseSupBound noise_expected_sup_bound(const ProblemConfig& cfg);

struct NoiseTailThreshold {
  double threshold = 0.0;
  double activation_m = 0.0;  // C3 max(mu1^2, mu2) log(1/delta)
  bool activated = false;     // m >= activation_m
};
NoiseTailThreshold noise_tail_threshold(const ProblemConfig& cfg);

/// Smallest integers strictly above the displayed conditions (floor + 1).
/// Doubles so that a diverging condition reads as +inf.
struct MinSamples {
  double combined = 0.0;  // single leading constant
  double split = 0.0;     // separate constant per term
};
MinSamples min_samples_noiseless(const ProblemConfig& cfg);

struct NoisyMinSamples {
  double combined = 0.0;    // max(three-term condition, activation)
  double split = 0.0;       // same with per-term constants
  double activation = 0.0;  // ceil(C3 max(mu1^2, mu2) log(1/delta))
};
/// Uses alpha1 only; the gap parameter does not enter the noisy condition.
NoisyMinSamples min_samples_noisy(const ProblemConfig& cfg);

/// Tone specialisation: flat metrics on the band, alpha1 = 0.218.
inline constexpr double kToneSidelobe = 0.218;
inline constexpr double kToneMainlobe = 0.636;
NoisyMinSamples min_samples_tone(const FrequencyBand& band, const SearchWindow& window, double delta, double amp,
                                 double sigma_n);

/// 2 pi C1 |A| |T| max(1/sqrt m, sqrt log(4/delta) / m) sqrt log(12 Omega T / delta).
double tone_tail_threshold(const ProblemConfig& cfg);

/// m needed for the Nyquist-grid winner to land within one bin of the tone.
double min_samples_tone_grid(const ProblemConfig& cfg);

struct BreakdownSigma {
  double rough = 0.0;       // |A| ||s|| sqrt(m / |Omega|)
  double guaranteed = 0.0;  // rough / sqrt log(Omega T)
  double nyquist = 0.0;     // |A| ||s||, the Nyquist-sampled filter's level
};
BreakdownSigma breakdown_sigma(const ProblemConfig& cfg);

struct PointwiseBounds {
  double deviation = 0.0;  // eta mu1 / sqrt m
  double noise = 0.0;      // sigma sqrt|Omega| ||s|| / (2 pi sqrt m)
};
PointwiseBounds pointwise_bounds(const ProblemConfig& cfg);

struct BoundReport {
  ProblemConfig config;
  ExpectedSupBound theorem1;
  TailThreshold theorem2;
  NoiseSupBound theorem3;
  NoiseTailThreshold theorem4;
  MinSamples corollary1;
  NoisyMinSamples corollary5;
  double corollary2_tone_U = 0.0;
  double tone_grid_min_samples = 0.0;
  NoisyMinSamples corollary4;
  BreakdownSigma breakdown;
  PointwiseBounds pointwise;
};
BoundReport make_report(const ProblemConfig& cfg);

}  // namespace cmf
