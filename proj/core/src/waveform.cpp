#include "cmf/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmf/errors.hpp"

namespace cmf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kResyncEvery = 512;

std::pair<double, double> integration_range(const Template& t, const FrequencyBand& band) {
  auto [slo, shi] = t.support();
  return {std::max(band.lo(), slo), std::min(band.hi(), shi)};
}

struct SimpsonNodes {
  double lo = 0.0;
  double h = 0.0;
  std::vector<complex> weighted;  // Simpson weight times s(omega_j)
};

SimpsonNodes simpson_nodes(const Template& t, const FrequencyBand& band, const QuadratureSpec& quad) {
  auto [lo, hi] = integration_range(t, band);
  SimpsonNodes n;
  if (!(hi > lo)) {
    return n;
  }
  std::size_t count = std::max<std::size_t>(quad.nodes, 3);
  if (count % 2 == 0) {
    ++count;
  }
  n.lo = lo;
  n.h = (hi - lo) / static_cast<double>(count - 1);
  n.weighted.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    double omega = (j + 1 == count) ? hi : lo + n.h * static_cast<double>(j);
    double w = (j == 0 || j + 1 == count) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    n.weighted[j] = (w * n.h / 3.0) * t.spectrum(omega);
  }
  return n;
}

complex simpson_phasor(const SimpsonNodes& n, double time) {
  const complex rot = std::polar(1.0, n.h * time);
  complex sum{0.0, 0.0};
  complex ph;
  for (std::size_t j = 0; j < n.weighted.size(); ++j) {
    if (j % kResyncEvery == 0) {
      ph = std::polar(1.0, (n.lo + n.h * static_cast<double>(j)) * time);
    }
    sum += n.weighted[j] * ph;
    ph *= rot;
  }
  return sum / (2.0 * kPi);
}

// (level / 2pi) int_lo^hi e^{i omega t} d omega.
complex flat_waveform(const FlatBand& f, double lo, double hi, double time) {
  double width = hi - lo;
  double x = 0.5 * width * time;
  if (std::abs(x) < 1e-8) {
    // sinc(x) = 1 - x^2/6 + ...
    return f.level * width / (2.0 * kPi) * (1.0 - x * x / 6.0) * std::polar(1.0, 0.5 * (lo + hi) * time);
  }
  return f.level * width / (2.0 * kPi) * (std::sin(x) / x) * std::polar(1.0, 0.5 * (lo + hi) * time);
}

}  // namespace

complex waveform_value(const Template& t, const FrequencyBand& band, double time, const QuadratureSpec& quad) {
  if (const auto* f = std::get_if<FlatBand>(&t.kind())) {
    auto [lo, hi] = integration_range(t, band);
    if (!(hi > lo)) {
      return {0.0, 0.0};
    }
    return flat_waveform(*f, lo, hi, time);
  }
  return simpson_phasor(simpson_nodes(t, band, quad), time);
}

WaveformTable::WaveformTable(const Template& t, const FrequencyBand& band, double t_lo, double t_hi, double step,
                             const QuadratureSpec& quad)
    : t_lo_(t_lo), t_hi_(t_hi), step_(step > 0.0 ? step : 1.0 / (8.0 * band.width())) {
  if (!(t_hi > t_lo)) {
    throw InvalidParameter("waveform table needs t_hi > t_lo");
  }
  auto count = std::max<std::size_t>(static_cast<std::size_t>(std::ceil((t_hi - t_lo) / step_)) + 1, 4);
  values_.resize(count);
  if (const auto* f = std::get_if<FlatBand>(&t.kind())) {
    auto [lo, hi] = integration_range(t, band);
    for (std::size_t i = 0; i < count; ++i) {
      values_[i] = hi > lo ? flat_waveform(*f, lo, hi, t_lo_ + step_ * static_cast<double>(i)) : complex{};
    }
    return;
  }
  auto nodes = simpson_nodes(t, band, quad);
  for (std::size_t i = 0; i < count; ++i) {
    values_[i] = simpson_phasor(nodes, t_lo_ + step_ * static_cast<double>(i));
  }
}

complex WaveformTable::operator()(double time) const {
  if (time < t_lo_ || time > t_hi_) {
    return {0.0, 0.0};
  }
  const auto n = values_.size();
  double u = (time - t_lo_) / step_;
  auto i = static_cast<std::ptrdiff_t>(std::floor(u));
  // Stencil i-1..i+2, shifted inward at the table edges.
  i = std::clamp<std::ptrdiff_t>(i, 1, static_cast<std::ptrdiff_t>(n) - 3);
  double x = u - static_cast<double>(i);
  double w0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
  double w1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
  double w2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
  double w3 = (x + 1.0) * x * (x - 1.0) / 6.0;
  return w0 * values_[i - 1] + w1 * values_[i] + w2 * values_[i + 1] + w3 * values_[i + 2];
}

std::vector<double> nyquist_times(const FrequencyBand& band, const SearchWindow& window) {
  const double dt = 2.0 * kPi / band.width();
  auto first = static_cast<long long>(std::ceil(window.tau_min() / dt - 1e-12));
  auto last = static_cast<long long>(std::floor(window.tau_max() / dt + 1e-12));
  std::vector<double> out;
  for (long long l = first; l <= last; ++l) {
    out.push_back(static_cast<double>(l) * dt);
  }
  return out;
}

}  // namespace cmf
