#pragma once

// Time-domain view of a band-limited template,
// s(t) = (1/2pi) int_{Omega} s(omega) e^{i omega t} d omega,
// used by the Nyquist-rate baseline filter.

#include <cstddef>
#include <vector>

#include "cmf/templates.hpp"

namespace cmf {

/// Closed form for flat templates, composite Simpson on `quad.nodes`
/// (rounded up to odd) otherwise.
complex waveform_value(const Template& t, const FrequencyBand& band, double time, const QuadratureSpec& quad = {});

/// s(t) tabulated on [t_lo, t_hi] and read back with 4-point Lagrange
/// interpolation. Zero outside the table.
class WaveformTable {
 public:
  /// step = 0 selects 1 / (8 |Omega|), about 50 points per shortest period.
  WaveformTable(const Template& t, const FrequencyBand& band, double t_lo, double t_hi, double step = 0.0,
                const QuadratureSpec& quad = {std::size_t{1} << 14});

  complex operator()(double time) const;

  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  double step() const { return step_; }
  std::size_t size() const { return values_.size(); }

 private:
  double t_lo_;
  double t_hi_;
  double step_;
  std::vector<complex> values_;
};

/// Nyquist instants l 2pi/|Omega| (integer l) that fall inside the window.
std::vector<double> nyquist_times(const FrequencyBand& band, const SearchWindow& window);

}  // namespace cmf
