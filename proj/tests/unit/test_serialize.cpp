#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "cmf/errors.hpp"
#include "cmf/serialize.hpp"

using namespace cmf;

TEST_CASE("template documents round-trip") {
  FrequencyBand band(100.0);
  std::vector<json> docs{
      {{"kind", "gaussian"}, {"a", 0.01}},
      {{"kind", "flat"}, {"level", 2.0}, {"support", {-20.0, 60.0}}},
      {{"kind", "custom"}, {"omega", {-100.0, 0.0, 100.0}}, {"mag", {0.5, 1.0, 0.5}}, {"case", "real"}},
      {{"kind", "custom"}, {"omega", {-10.0, 50.0}}, {"mag", {1.0, 2.0}}, {"case", "complex"}},
  };
  for (const auto& d : docs) {
    auto t = template_from_json(d, band);
    CHECK(template_to_json(t) == d);
    auto back = template_from_json(template_to_json(t), band);
    for (double w : {-70.0, 0.0, 33.0}) {
      CHECK(back.spectrum(w) == t.spectrum(w));
    }
  }
  auto flat = template_from_json({{"kind", "flat"}}, band);
  CHECK(flat.support() == std::pair{-100.0, 100.0});
  CHECK(flat.spectrum(5.0) == complex{1.0, 0.0});
}

TEST_CASE("malformed template documents are config errors") {
  FrequencyBand band(100.0);
  CHECK_THROWS_AS(template_from_json({{"kind", "triangle"}}, band), ConfigError);
  CHECK_THROWS_AS(template_from_json({{"a", 0.1}}, band), ConfigError);
  CHECK_THROWS_AS(template_from_json({{"kind", "gaussian"}, {"a", "wide"}}, band), ConfigError);
  CHECK_THROWS_AS(template_from_json({{"kind", "flat"}, {"support", {1.0}}}, band), ConfigError);
  CHECK_THROWS_AS(
      template_from_json({{"kind", "custom"}, {"omega", {0.0, 1.0}}, {"mag", {1.0, 1.0}}, {"case", "odd"}}, band),
      ConfigError);
}

TEST_CASE("measurement sets round-trip bit for bit") {
  DelayMeasurements d{{-3.5, 0.1, 599.25}, {{1.0, -2.0}, {0.1 / 3.0, 1e-300}, {-0.0, 5.0}}, FrequencyBand(600.0),
                      RngSpec{7, 12}};
  auto j = measurements_to_json(d);
  CHECK(j["kind"] == "delay");
  CHECK(j["y"].size() == 6);
  auto back = delay_measurements_from_json(json::parse(j.dump()));
  CHECK(back.freqs == d.freqs);
  CHECK(back.y == d.y);
  CHECK(back.band.omega_max() == 600.0);
  CHECK(back.seed == d.seed);

  ToneMeasurements t{{-0.5, 0.25}, {{1.0, 0.0}, {0.0, 1.0}}, SearchWindow(-1.0, 1.0), 12.5, RngSpec{1, 2}};
  auto tb = tone_measurements_from_json(json::parse(measurements_to_json(t).dump()));
  CHECK(tb.times == t.times);
  CHECK(tb.y == t.y);
  CHECK(tb.omega0 == 12.5);
  CHECK(tb.window.tau_min() == -1.0);
  CHECK(tb.seed == t.seed);

  t.omega0 = std::numeric_limits<double>::quiet_NaN();
  auto jt = measurements_to_json(t);
  CHECK(jt["omega0"].is_null());
  CHECK(std::isnan(tone_measurements_from_json(jt).omega0));

  auto bad = measurements_to_json(d);
  bad["y"].push_back(1.0);
  CHECK_THROWS_AS(delay_measurements_from_json(bad), ConfigError);
}

TEST_CASE("chirp and complex values") {
  ChirpSpec c{50.0, -100.0, 0.3, {0.5, -0.5}};
  auto back = chirp_from_json(chirp_to_json(c));
  CHECK(back.omega_c == 50.0);
  CHECK(back.alpha == -100.0);
  CHECK(back.t0 == 0.3);
  CHECK(back.amplitude == c.amplitude);
  auto minimal = chirp_from_json({{"omega_c", 1.0}, {"alpha", 2.0}});
  CHECK(minimal.amplitude == complex{1.0, 0.0});
  CHECK_THROWS_AS(chirp_from_json({{"omega_c", 1.0}}), ConfigError);

  CHECK(complex_from_json(json(2.5)) == complex{2.5, 0.0});
  CHECK(complex_from_json(json::array({1.0, -1.0})) == complex{1.0, -1.0});
  CHECK_THROWS_AS(complex_from_json(json::array({1.0})), ConfigError);
  CHECK_THROWS_AS(complex_from_json(json("x")), ConfigError);
}

TEST_CASE("trace CSV layout") {
  CorrelationTrace tr;
  tr.taus = {0.0, 0.25};
  tr.values = {complex{3.0, -4.0}, complex{0.1, 0.0}};
  std::ostringstream os;
  write_trace_csv(os, tr);
  CHECK(os.str() == "tau,re,im,abs\n0,3,-4,5\n0.25,0.1,0,0.1\n");

  ToneTrace tt;
  tt.omegas = {-1.5};
  tt.values = {complex{0.0, 2.0}};
  std::ostringstream ot;
  write_tone_trace_csv(ot, tt);
  CHECK(ot.str() == "omega,re,im,abs\n-1.5,0,2,2\n");
}

TEST_CASE("shortest round-trip formatting") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.4, 5e-324}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.4) == "0.4");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("FNV-1a reference vectors and config hashes") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  json a{{"x", 1}, {"y", {1, 2}}};
  json b{{"y", {1, 2}}, {"x", 1}};
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).rfind("fnv1a64:", 0) == 0);
  CHECK(config_hash(a).size() == 8 + 16);
  b["x"] = 2;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("bound report keys") {
  ProblemConfig c;
  c.m = 100;
  c.band = FrequencyBand(50.0);
  c.window = SearchWindow(0.0, 1.0);
  c.metrics = flat_metrics(c.band);
  c.lobe = {0.2, 0.05, 0.0};
  auto j = report_to_json(make_report(c));
  for (const char* key : {"config", "constants", "theorem1", "theorem2", "theorem3", "theorem4", "corollary1",
                          "corollary2", "corollary4", "corollary5", "breakdown_sigma", "pointwise"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["constants"]["version"] == std::string(kConstantsVersion));
  CHECK(j["constants"]["C1"] == 18.02);
  CHECK(j["theorem1"]["simplified"].get<double>() == expected_sup_bound(c).simplified);
}
