#include "cmf/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "cmf/errors.hpp"

namespace cmf {

namespace {

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing field \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field \"") + key + "\": " + e.what());
  }
}

json interleave(const std::vector<complex>& y) {
  json arr = json::array();
  for (const auto& v : y) {
    arr.push_back(v.real());
    arr.push_back(v.imag());
  }
  return arr;
}

std::vector<complex> deinterleave(const json& arr) {
  auto flat = arr.get<std::vector<double>>();
  if (flat.size() % 2 != 0) {
    throw ConfigError("interleaved sample array has odd length");
  }
  std::vector<complex> y(flat.size() / 2);
  for (std::size_t k = 0; k < y.size(); ++k) {
    y[k] = {flat[2 * k], flat[2 * k + 1]};
  }
  return y;
}

json seed_to_json(const RngSpec& s) { return {{"master", s.master_seed}, {"stream", s.stream_index}}; }

RngSpec seed_from_json(const json& j) {
  if (!j.contains("seed")) {
    return {};
  }
  const auto& s = j.at("seed");
  return {get_field<std::uint64_t>(s, "master"), get_field<std::uint64_t>(s, "stream")};
}

void write_row(std::ostream& os, double x, complex v) {
  os << format_double(x) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
     << format_double(std::abs(v)) << '\n';
}

}  // namespace

Template template_from_json(const json& j, const FrequencyBand& band) {
  auto kind = get_field<std::string>(j, "kind");
  if (kind == "gaussian") {
    return make_gaussian_pulse(get_field<double>(j, "a"));
  }
  if (kind == "flat") {
    double level = j.contains("level") ? get_field<double>(j, "level") : 1.0;
    std::optional<std::pair<double, double>> support;
    if (j.contains("support")) {
      auto s = get_field<std::vector<double>>(j, "support");
      if (s.size() != 2) {
        throw ConfigError("flat support must be [lo, hi]");
      }
      support = std::pair{s[0], s[1]};
    }
    return make_flat_band(level, band, support);
  }
  if (kind == "custom") {
    SignalCase c = SignalCase::Complex;
    if (j.contains("case")) {
      auto name = get_field<std::string>(j, "case");
      if (name == "real") {
        c = SignalCase::Real;
      } else if (name != "complex") {
        throw ConfigError("custom case must be \"real\" or \"complex\"");
      }
    }
    return make_custom(get_field<std::vector<double>>(j, "omega"), get_field<std::vector<double>>(j, "mag"), c);
  }
  throw ConfigError("unknown template kind \"" + kind + "\"");
}

json template_to_json(const Template& t) {
  if (const auto* g = std::get_if<GaussianPulse>(&t.kind())) {
    return {{"kind", "gaussian"}, {"a", g->a}};
  }
  if (const auto* f = std::get_if<FlatBand>(&t.kind())) {
    return {{"kind", "flat"}, {"level", f->level}, {"support", {f->lo, f->hi}}};
  }
  const auto& c = std::get<CustomSpectrum>(t.kind());
  return {{"kind", "custom"},
          {"omega", c.omega},
          {"mag", c.magnitude},
          {"case", t.is_real() ? "real" : "complex"}};
}

json metrics_to_json(const SpectralMetrics& m) {
  return {{"l2sq", m.l2sq}, {"l4_4", m.l4_4}, {"linf_sq", m.linf_sq},
          {"band_width", m.band_width}, {"mu1", m.mu1}, {"mu2", m.mu2}};
}

json measurements_to_json(const DelayMeasurements& meas) {
  return {{"kind", "delay"},
          {"omega_max", meas.band.omega_max()},
          {"omega", meas.freqs},
          {"y", interleave(meas.y)},
          {"seed", seed_to_json(meas.seed)}};
}

DelayMeasurements delay_measurements_from_json(const json& j) {
  FrequencyBand band(get_field<double>(j, "omega_max"));
  auto freqs = get_field<std::vector<double>>(j, "omega");
  auto y = deinterleave(j.at("y"));
  if (y.size() != freqs.size()) {
    throw ConfigError("omega and y lengths differ");
  }
  return {std::move(freqs), std::move(y), band, seed_from_json(j)};
}

json measurements_to_json(const ToneMeasurements& meas) {
  json j{{"kind", "tone"},
         {"window", {meas.window.tau_min(), meas.window.tau_max()}},
         {"t", meas.times},
         {"y", interleave(meas.y)},
         {"seed", seed_to_json(meas.seed)}};
  j["omega0"] = std::isfinite(meas.omega0) ? json(meas.omega0) : json(nullptr);
  return j;
}

ToneMeasurements tone_measurements_from_json(const json& j) {
  auto w = get_field<std::vector<double>>(j, "window");
  if (w.size() != 2) {
    throw ConfigError("window must be [lo, hi]");
  }
  auto times = get_field<std::vector<double>>(j, "t");
  auto y = deinterleave(j.at("y"));
  if (y.size() != times.size()) {
    throw ConfigError("t and y lengths differ");
  }
  double omega0 = std::numeric_limits<double>::quiet_NaN();
  if (j.contains("omega0") && !j.at("omega0").is_null()) {
    omega0 = get_field<double>(j, "omega0");
  }
  return {std::move(times), std::move(y), SearchWindow(w[0], w[1]), omega0, seed_from_json(j)};
}

complex complex_from_json(const json& j) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("expected a number or a [re, im] pair");
}

json complex_to_json(complex z) { return json::array({z.real(), z.imag()}); }

ChirpSpec chirp_from_json(const json& j) {
  ChirpSpec c;
  c.omega_c = get_field<double>(j, "omega_c");
  c.alpha = get_field<double>(j, "alpha");
  if (j.contains("t0")) {
    c.t0 = get_field<double>(j, "t0");
  }
  if (j.contains("amplitude")) {
    c.amplitude = complex_from_json(j.at("amplitude"));
  }
  return c;
}

json chirp_to_json(const ChirpSpec& c) {
  return {{"omega_c", c.omega_c}, {"alpha", c.alpha}, {"t0", c.t0}, {"amplitude", complex_to_json(c.amplitude)}};
}

json report_to_json(const BoundReport& r) {
  const auto& cfg = r.config;
  const auto& k = Constants::standard();
  json j;
  j["config"] = {{"m", cfg.m},
                 {"delta", cfg.delta},
                 {"omega_max", cfg.band.omega_max()},
                 {"window", {cfg.window.tau_min(), cfg.window.tau_max()}},
                 {"amp", cfg.amp},
                 {"sigma_n", cfg.sigma_n},
                 {"alpha1", cfg.lobe.alpha1},
                 {"alpha2", cfg.lobe.alpha2},
                 {"epsilon", cfg.lobe.epsilon},
                 {"omega_t", cfg.omega_t()},
                 {"eta", cfg.eta()},
                 {"metrics", metrics_to_json(cfg.metrics)}};
  j["constants"] = {{"version", std::string(kConstantsVersion)},
                    {"C1", k.c1}, {"C2", k.c2}, {"C3", k.c3}, {"C4", k.c4}, {"C5", k.c5}};
  j["theorem1"] = {{"two_term", r.theorem1.two_term}, {"simplified", r.theorem1.simplified}};
  j["theorem2"] = {{"U_c1_form", r.theorem2.c1_form}, {"U_refined", r.theorem2.refined}};
  j["theorem3"] = {{"two_term", r.theorem3.two_term}, {"simplified", r.theorem3.simplified}};
  j["theorem4"] = {{"threshold", r.theorem4.threshold},
                   {"activation_m", r.theorem4.activation_m},
                   {"activated", r.theorem4.activated}};
  j["corollary1"] = {{"m_min", r.corollary1.combined}, {"m_min_split", r.corollary1.split}};
  j["corollary2"] = {{"U", r.corollary2_tone_U}, {"grid_m_min", r.tone_grid_min_samples}};
  j["corollary4"] = {{"m_min", r.corollary4.combined},
                     {"m_min_split", r.corollary4.split},
                     {"activation_m", r.corollary4.activation}};
  j["corollary5"] = {{"m_min", r.corollary5.combined},
                     {"m_min_split", r.corollary5.split},
                     {"activation_m", r.corollary5.activation}};
  j["breakdown_sigma"] = {{"rough", r.breakdown.rough},
                          {"guaranteed", r.breakdown.guaranteed},
                          {"nyquist", r.breakdown.nyquist}};
  j["pointwise"] = {{"deviation", r.pointwise.deviation}, {"noise", r.pointwise.noise}};
  return j;
}

void write_trace_csv(std::ostream& os, const CorrelationTrace& trace) {
  os << "tau,re,im,abs\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    write_row(os, trace.taus[i], trace.values[i]);
  }
}

void write_tone_trace_csv(std::ostream& os, const ToneTrace& trace) {
  os << "omega,re,im,abs\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    write_row(os, trace.omegas[i], trace.values[i]);
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return std::string("fnv1a64:") + buf;
}

}  // namespace cmf
