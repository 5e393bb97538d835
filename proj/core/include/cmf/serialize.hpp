#pragma once

// JSON and CSV forms of templates, measurement sets, traces, chirps and
// bound reports.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cmf/bounds.hpp"
#include "cmf/correlation.hpp"
#include "cmf/sampling.hpp"
#include "cmf/templates.hpp"
#include "cmf/tone.hpp"

namespace cmf {

using json = nlohmann::json;

/// {"kind": "gaussian", "a": ..} | {"kind": "flat", "level": .., "support": [lo, hi]}
/// | {"kind": "custom", "omega": [..], "mag": [..], "case": "real" | "complex"}.
/// Flat support defaults to the band. Throws ConfigError on malformed input.
Template template_from_json(const json& j, const FrequencyBand& band);
json template_to_json(const Template& t);

json metrics_to_json(const SpectralMetrics& m);

/// Frequencies under "omega", samples as [re0, im0, re1, im1, ...] under "y".
json measurements_to_json(const DelayMeasurements& meas);
DelayMeasurements delay_measurements_from_json(const json& j);

/// Times under "t", samples interleaved under "y".
json measurements_to_json(const ToneMeasurements& meas);
ToneMeasurements tone_measurements_from_json(const json& j);

/// {"omega_c", "alpha", "t0", "amplitude": number | [re, im]}.
ChirpSpec chirp_from_json(const json& j);
json chirp_to_json(const ChirpSpec& c);

/// Accepts a number or a [re, im] pair.
complex complex_from_json(const json& j);
json complex_to_json(complex z);

/// Keys are the theorem and corollary names.
json report_to_json(const BoundReport& r);

/// Columns tau, re, im, abs.
void write_trace_csv(std::ostream& os, const CorrelationTrace& trace);
/// Columns omega, re, im, abs.
void write_tone_trace_csv(std::ostream& os, const ToneTrace& trace);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);
/// "fnv1a64:" followed by 16 hex digits of the hash of the compact dump.
std::string config_hash(const json& config);

}  // namespace cmf
