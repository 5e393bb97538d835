#pragma once

// Signal templates described by their band-limited spectrum, together with
// the spectral norms and autocorrelation that drive every estimator and
// bound in the library.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace cmf {

using complex = std::complex<double>;

/// Observation band [-omega_max, omega_max] in rad/s.
class FrequencyBand {
 public:
  explicit FrequencyBand(double omega_max);

  double omega_max() const { return omega_max_; }
  double lo() const { return -omega_max_; }
  double hi() const { return omega_max_; }
  /// |Omega| = 2 omega_max.
  double width() const { return 2.0 * omega_max_; }
  bool contains(double omega) const { return omega >= lo() && omega <= hi(); }

 private:
  double omega_max_;
};

/// Search window [tau_min, tau_max]. Used as the delay range for the delay
/// problem and as the observation interval for the tone problem.
class SearchWindow {
 public:
  SearchWindow(double tau_min, double tau_max);

  double tau_min() const { return tau_min_; }
  double tau_max() const { return tau_max_; }
  double length() const { return tau_max_ - tau_min_; }
  bool contains(double tau) const { return tau >= tau_min_ && tau <= tau_max_; }

 private:
  double tau_min_;
  double tau_max_;
};

enum class SignalCase { Real, Complex };

struct GaussianPulse {
  double a;  // width parameter (seconds)
};

struct FlatBand {
  double level;
  double lo;  // support sub-interval of the band
  double hi;
};

/// Tabulated magnitude, linearly interpolated, zero outside the table.
struct CustomSpectrum {
  std::vector<double> omega;
  std::vector<double> magnitude;
};

struct QuadratureSpec {
  std::size_t nodes = std::size_t{1} << 16;
};

class Template {
 public:
  using Kind = std::variant<GaussianPulse, FlatBand, CustomSpectrum>;

  Template(Kind kind, SignalCase signal_case);

  /// Spectrum value; zero outside the template's own support.
  complex spectrum(double omega) const;
  complex operator()(double omega) const { return spectrum(omega); }

  const Kind& kind() const { return kind_; }
  SignalCase signal_case() const { return case_; }
  bool is_real() const { return case_ == SignalCase::Real; }

  /// Interval outside of which the spectrum is identically zero
  /// (infinite for the Gaussian pulse).
  std::pair<double, double> support() const;

  /// Custom templates are interpolated tables and only approximate the
  /// underlying spectrum.
  bool approximate() const { return std::holds_alternative<CustomSpectrum>(kind_); }

  /// Maximum of |s(omega)|^2 over the part of `band` where the spectrum
  /// lives, from the analytic form of each kind.
  double peak_magnitude_sq(const FrequencyBand& band) const;

  /// Gaussian width parameter, if this is a Gaussian pulse.
  std::optional<double> gaussian_width() const;

 private:
  Kind kind_;
  SignalCase case_;
};

Template make_gaussian_pulse(double a);

/// Flat magnitude `level` on `support` (defaults to the whole band).
Template make_flat_band(double level, const FrequencyBand& band,
                        std::optional<std::pair<double, double>> support = std::nullopt);

/// `omega` must be strictly increasing. A Real case request requires a
/// magnitude table symmetric about zero.
Template make_custom(std::vector<double> omega, std::vector<double> magnitude,
                     SignalCase signal_case = SignalCase::Complex);

struct SpectralMetrics {
  double l2sq = 0.0;     // ||s||_2^2
  double l4_4 = 0.0;     // ||s||_4^4
  double linf_sq = 0.0;  // ||s||_inf^2
  double band_width = 0.0;
  double mu1 = 0.0;  // sqrt(|Omega|) ||s||_4^2 / ||s||_2^2
  double mu2 = 0.0;  // |Omega| ||s||_inf^2 / ||s||_2^2

  double l2() const;
  /// Peak magnitude of the mean function, |A| ||s||_2^2 / (2 pi).
  double eta(double amplitude_abs) const;
};

SpectralMetrics compute_metrics(const Template& t, const FrequencyBand& band,
                                const QuadratureSpec& quad = {});

/// R_ss(tau) = (1/2pi) int_Omega |s(omega)|^2 e^{i omega tau} d omega.
complex autocorrelation(const Template& t, const FrequencyBand& band, double tau,
                        const QuadratureSpec& quad = {});

/// R_ss at every entry of `taus`. Same quadrature as `autocorrelation`,
/// with the node phasors advanced by rotation instead of per-node sincos.
std::vector<complex> autocorrelation_curve(const Template& t, const FrequencyBand& band,
                                           std::span<const double> taus,
                                           const QuadratureSpec& quad = {});

struct LobeScan {
  double limit = 0.0;  // largest |tau| examined
  double step = 0.0;   // 0 selects 1 / (64 |Omega|)

  static LobeScan over(const SearchWindow& window) { return {window.length(), 0.0}; }
};

/// Grid approximation of the smallest alpha1 with |R_ss(tau)| <= alpha1 R_ss(0)
/// for all alpha2 < |tau| <= scan.limit. The true sup can only be larger.
double lobe_profile(const Template& t, const FrequencyBand& band, double alpha2,
                    const LobeScan& scan, const QuadratureSpec& quad = {});

}  // namespace cmf
