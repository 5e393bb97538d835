#include "cmf/templates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <tuple>
#include <string>

#include "cmf/errors.hpp"

namespace cmf {

namespace {

constexpr double kPi = std::numbers::pi;

// Rotated phasors drift by roughly one ulp per step; resynchronising with an
// exact sincos every this many nodes keeps the drift below 1e-13.
constexpr std::size_t kResyncEvery = 512;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Nodes {
  double lo = 0.0;
  double h = 0.0;
  std::size_t count = 0;
  std::vector<double> weighted;  // trapezoid weight times |s(omega_j)|^2
};

// Integration interval is the band intersected with the template support.
Nodes trapezoid_nodes(const Template& t, const FrequencyBand& band, const QuadratureSpec& quad) {
  if (quad.nodes < 2) {
    throw InvalidParameter("quadrature needs at least 2 nodes");
  }
  auto [slo, shi] = t.support();
  double lo = std::max(band.lo(), slo);
  double hi = std::min(band.hi(), shi);
  Nodes n;
  if (!(hi > lo)) {
    return n;
  }
  n.lo = lo;
  n.count = quad.nodes;
  n.h = (hi - lo) / static_cast<double>(quad.nodes - 1);
  n.weighted.resize(n.count);
  for (std::size_t j = 0; j < n.count; ++j) {
    double omega = (j + 1 == n.count) ? hi : lo + n.h * static_cast<double>(j);
    double w = (j == 0 || j + 1 == n.count) ? 0.5 * n.h : n.h;
    n.weighted[j] = w * std::norm(t.spectrum(omega));
  }
  return n;
}

complex integrate_phasor(const Nodes& n, double tau) {
  if (n.count == 0) {
    return {0.0, 0.0};
  }
  const complex rot = std::polar(1.0, n.h * tau);
  double re = 0.0;
  double im = 0.0;
  complex ph;
  for (std::size_t j = 0; j < n.count; ++j) {
    if (j % kResyncEvery == 0) {
      ph = std::polar(1.0, (n.lo + n.h * static_cast<double>(j)) * tau);
    }
    re += n.weighted[j] * ph.real();
    im += n.weighted[j] * ph.imag();
    ph = {ph.real() * rot.real() - ph.imag() * rot.imag(),
          ph.real() * rot.imag() + ph.imag() * rot.real()};
  }
  return complex{re, im} / (2.0 * kPi);
}

// Flat spectra have a closed-form correlation; everything else goes through
// the trapezoid nodes.
class Correlator {
 public:
  Correlator(const Template& t, const FrequencyBand& band, const QuadratureSpec& quad) {
    if (const auto* f = std::get_if<FlatBand>(&t.kind())) {
      lo_ = std::max(band.lo(), f->lo);
      hi_ = std::min(band.hi(), f->hi);
      level_sq_ = f->level * f->level;
      flat_ = true;
    } else {
      nodes_ = trapezoid_nodes(t, band, quad);
    }
  }

  complex operator()(double tau) const {
    if (!flat_) {
      return integrate_phasor(nodes_, tau);
    }
    if (!(hi_ > lo_)) {
      return {0.0, 0.0};
    }
    double half = 0.5 * (hi_ - lo_) * tau;
    double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
    return std::polar(level_sq_ * (hi_ - lo_) * sinc / (2.0 * kPi), 0.5 * (hi_ + lo_) * tau);
  }

 private:
  bool flat_ = false;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double level_sq_ = 0.0;
  Nodes nodes_;
};

// Exact integrals of |s|^2 and |s|^4 for piecewise-linear and flat spectra.
// Three-point Gauss-Legendre per segment is exact up to degree five.
std::optional<std::pair<double, double>> exact_norms(const Template& t, const FrequencyBand& band) {
  if (const auto* f = std::get_if<FlatBand>(&t.kind())) {
    double len = std::max(0.0, std::min(band.hi(), f->hi) - std::max(band.lo(), f->lo));
    double p = f->level * f->level;
    return std::pair{p * len, p * p * len};
  }
  const auto* c = std::get_if<CustomSpectrum>(&t.kind());
  if (c == nullptr) {
    return std::nullopt;
  }
  static const double gx = std::sqrt(0.6);
  const double nodes[3] = {-gx, 0.0, gx};
  const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double l2sq = 0.0;
  double l4_4 = 0.0;
  for (std::size_t i = 0; i + 1 < c->omega.size(); ++i) {
    double a = std::max(band.lo(), c->omega[i]);
    double b = std::min(band.hi(), c->omega[i + 1]);
    if (!(b > a)) {
      continue;
    }
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    for (int k = 0; k < 3; ++k) {
      double p = std::norm(t.spectrum(mid + half * nodes[k]));
      l2sq += half * weights[k] * p;
      l4_4 += half * weights[k] * p * p;
    }
  }
  return std::pair{l2sq, l4_4};
}

}  // namespace

FrequencyBand::FrequencyBand(double omega_max) : omega_max_(omega_max) {
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw InvalidParameter("omega_max must be positive and finite");
  }
}

SearchWindow::SearchWindow(double tau_min, double tau_max) : tau_min_(tau_min), tau_max_(tau_max) {
  if (!(tau_max > tau_min) || !std::isfinite(tau_min) || !std::isfinite(tau_max)) {
    throw InvalidParameter("search window needs tau_max > tau_min");
  }
}

Template::Template(Kind kind, SignalCase signal_case) : kind_(std::move(kind)), case_(signal_case) {}

complex Template::spectrum(double omega) const {
  return std::visit(
      overloaded{
          [&](const GaussianPulse& g) -> complex {
            return std::sqrt(2.0 * g.a) * std::pow(kPi, 0.25) * std::exp(-g.a * g.a * omega * omega / 2.0);
          },
          [&](const FlatBand& f) -> complex {
            return (omega >= f.lo && omega <= f.hi) ? complex{f.level, 0.0} : complex{0.0, 0.0};
          },
          [&](const CustomSpectrum& c) -> complex {
            const auto& x = c.omega;
            if (omega < x.front() || omega > x.back()) {
              return {0.0, 0.0};
            }
            auto it = std::upper_bound(x.begin(), x.end(), omega);
            if (it == x.end()) {
              return {c.magnitude.back(), 0.0};
            }
            std::size_t i = static_cast<std::size_t>(it - x.begin());
            double frac = (omega - x[i - 1]) / (x[i] - x[i - 1]);
            return {c.magnitude[i - 1] + frac * (c.magnitude[i] - c.magnitude[i - 1]), 0.0};
          },
      },
      kind_);
}

std::pair<double, double> Template::support() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [](const GaussianPulse&) { return std::pair{-inf, inf}; },
                        [](const FlatBand& f) { return std::pair{f.lo, f.hi}; },
                        [](const CustomSpectrum& c) { return std::pair{c.omega.front(), c.omega.back()}; },
                    },
                    kind_);
}

double Template::peak_magnitude_sq(const FrequencyBand& band) const {
  return std::visit(overloaded{
                        [](const GaussianPulse& g) { return 2.0 * g.a * std::sqrt(kPi); },
                        [&](const FlatBand& f) {
                          bool overlaps = f.hi >= band.lo() && f.lo <= band.hi();
                          return overlaps ? f.level * f.level : 0.0;
                        },
                        [&](const CustomSpectrum& c) {
                          double best = 0.0;
                          for (std::size_t i = 0; i < c.omega.size(); ++i) {
                            if (band.contains(c.omega[i])) {
                              best = std::max(best, c.magnitude[i] * c.magnitude[i]);
                            }
                          }
                          best = std::max(best, std::norm(spectrum(band.lo())));
                          best = std::max(best, std::norm(spectrum(band.hi())));
                          return best;
                        },
                    },
                    kind_);
}

std::optional<double> Template::gaussian_width() const {
  if (const auto* g = std::get_if<GaussianPulse>(&kind_)) {
    return g->a;
  }
  return std::nullopt;
}

Template make_gaussian_pulse(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidParameter("gaussian width a must be positive");
  }
  return Template{GaussianPulse{a}, SignalCase::Real};
}

Template make_flat_band(double level, const FrequencyBand& band,
                        std::optional<std::pair<double, double>> support) {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw InvalidParameter("flat band level must be positive");
  }
  auto [lo, hi] = support.value_or(std::pair{band.lo(), band.hi()});
  if (!(hi > lo)) {
    throw InvalidParameter("flat band support must be a nonempty interval");
  }
  if (lo < band.lo() || hi > band.hi()) {
    throw InvalidParameter("flat band support must lie inside the observation band");
  }
  // A symmetric support has a conjugate-symmetric (real, even) spectrum.
  SignalCase c = (lo == -hi) ? SignalCase::Real : SignalCase::Complex;
  return Template{FlatBand{level, lo, hi}, c};
}

Template make_custom(std::vector<double> omega, std::vector<double> magnitude, SignalCase signal_case) {
  if (omega.size() < 2 || omega.size() != magnitude.size()) {
    throw InvalidParameter("custom spectrum needs matching omega/mag tables of length >= 2");
  }
  for (std::size_t i = 1; i < omega.size(); ++i) {
    if (!(omega[i] > omega[i - 1])) {
      throw InvalidParameter("custom spectrum omega must be strictly increasing");
    }
  }
  for (double v : magnitude) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidParameter("custom spectrum magnitudes must be finite and nonnegative");
    }
  }
  if (signal_case == SignalCase::Real) {
    const std::size_t n = omega.size();
    for (std::size_t i = 0; i < n; ++i) {
      double mirror_w = omega[n - 1 - i];
      double mirror_m = magnitude[n - 1 - i];
      double scale = std::max(1.0, std::abs(omega[i]));
      if (std::abs(omega[i] + mirror_w) > 1e-12 * scale ||
          std::abs(magnitude[i] - mirror_m) > 1e-12 * std::max(1.0, magnitude[i])) {
        throw InvalidParameter("real-case custom spectrum must be symmetric about zero");
      }
    }
  }
  return Template{CustomSpectrum{std::move(omega), std::move(magnitude)}, signal_case};
}

double SpectralMetrics::l2() const { return std::sqrt(l2sq); }

double SpectralMetrics::eta(double amplitude_abs) const { return amplitude_abs * l2sq / (2.0 * kPi); }

SpectralMetrics compute_metrics(const Template& t, const FrequencyBand& band, const QuadratureSpec& quad) {
  Nodes n = trapezoid_nodes(t, band, quad);
  SpectralMetrics m;
  m.band_width = band.width();
  double peak_node = 0.0;
  for (std::size_t j = 0; j < n.count; ++j) {
    double w = (j == 0 || j + 1 == n.count) ? 0.5 * n.h : n.h;
    double p = n.weighted[j] / w;  // |s|^2 at the node
    m.l2sq += n.weighted[j];
    m.l4_4 += n.weighted[j] * p;
    peak_node = std::max(peak_node, p);
  }
  if (auto exact = exact_norms(t, band)) {
    std::tie(m.l2sq, m.l4_4) = *exact;
  }
  if (!(m.l2sq > 0.0)) {
    throw ZeroEnergy("template has no energy on the observation band");
  }
  m.linf_sq = std::max(peak_node, t.peak_magnitude_sq(band));
  m.mu1 = std::sqrt(m.band_width) * std::sqrt(m.l4_4) / m.l2sq;
  m.mu2 = m.band_width * m.linf_sq / m.l2sq;
  return m;
}

complex autocorrelation(const Template& t, const FrequencyBand& band, double tau, const QuadratureSpec& quad) {
  return Correlator(t, band, quad)(tau);
}

std::vector<complex> autocorrelation_curve(const Template& t, const FrequencyBand& band,
                                           std::span<const double> taus, const QuadratureSpec& quad) {
  Correlator corr(t, band, quad);
  std::vector<complex> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    out.push_back(corr(tau));
  }
  return out;
}

double lobe_profile(const Template& t, const FrequencyBand& band, double alpha2, const LobeScan& scan,
                    const QuadratureSpec& quad) {
  if (!(alpha2 > 0.0)) {
    throw InvalidParameter("alpha2 must be positive");
  }
  if (!(scan.limit > alpha2)) {
    throw InvalidParameter("lobe scan limit must exceed alpha2");
  }
  double step = scan.step > 0.0 ? scan.step : 1.0 / (64.0 * band.width());
  auto count = static_cast<std::size_t>(std::ceil((scan.limit - alpha2) / step));
  std::vector<double> taus;
  taus.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    taus.push_back(std::min(scan.limit, alpha2 + step * static_cast<double>(i)));
  }
  Correlator corr(t, band, quad);
  double peak = std::abs(corr(0.0));
  if (!(peak > 0.0)) {
    throw ZeroEnergy("template has no energy on the observation band");
  }
  // |R(-tau)| = |R(tau)| since |s|^2 is real, so one side suffices.
  double worst = 0.0;
  for (double tau : taus) {
    worst = std::max(worst, std::abs(corr(tau)) / peak);
  }
  return worst;
}

}  // namespace cmf
