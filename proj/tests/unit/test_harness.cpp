#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cmf/errors.hpp"
#include "cmf/harness.hpp"
#include "cmf/sampling.hpp"

using namespace cmf;

namespace {

ExperimentConfig small_sweep() {
  return parse_experiment_config({{"experiment", "noise_sweep"},
                                  {"m", 50},
                                  {"trials", 40},
                                  {"seed", 17},
                                  {"c_grid", {0.0, 0.2, 1.0}},
                                  {"quad_nodes", 4096}});
}

std::string sweep_csv(ExperimentConfig cfg, unsigned threads) {
  cfg.threads = threads;
  std::ostringstream os;
  write_sweep_csv(os, run_noise_sweep(cfg));
  return os.str();
}

}  // namespace

TEST_CASE("experiment config parsing") {
  auto cfg = parse_experiment_config(json::object());
  CHECK(cfg.kind == ExperimentKind::NoiseSweep);
  CHECK(cfg.trials == 1000);
  CHECK(cfg.m() == 50);
  CHECK(cfg.resolved_grid_step() == doctest::Approx(1.0 / 4800.0));
  auto t = cfg.make_template();
  CHECK(cfg.resolved_success_radius(t) == doctest::Approx(0.01));
  CHECK(*cfg.resolved_exclusion_radius(t) == doctest::Approx(0.015));
  auto cs = cfg.resolved_c_grid();
  CHECK(cs.size() == 21);
  CHECK(cs.back() == doctest::Approx(1.0));

  for (auto name : {"noiseless_demo", "noise_sweep", "bound_check", "tone", "chirp", "nyquist_baseline"}) {
    CHECK(to_string(experiment_kind_from_string(name)) == name);
  }

  auto chirp = parse_experiment_config({{"experiment", "chirp"}, {"chirp", {{"omega_c", 10.0}, {"alpha", 5.0}}}});
  CHECK(chirp.random_t0);
  auto fixed = parse_experiment_config({{"chirp", {{"omega_c", 10.0}, {"alpha", 5.0}, {"t0", 0.2}}}});
  CHECK_FALSE(fixed.random_t0);

  auto flat = parse_experiment_config({{"template", {{"kind", "flat"}}}, {"omega_max", 100.0}});
  CHECK_THROWS_AS(flat.resolved_success_radius(flat.make_template()), ConfigError);
  CHECK_FALSE(flat.resolved_exclusion_radius(flat.make_template()).has_value());
}

TEST_CASE("invalid configs are rejected") {
  std::vector<json> bad{
      {{"bogus", 1}},
      {{"experiment", "fourier"}},
      {{"trials", 0}},
      {{"trials", "many"}},
      {{"m", 0}},
      {{"m", json::array()}},
      {{"c_grid", {0.0, 1.5}}},
      {{"sigma_n", -1.0}},
      {{"grid_step", 0.0}},
      {{"window", {1.0, 0.0}}},
      {{"omega_max", -3.0}},
      {{"template", {{"kind", "gaussian"}, {"a", -1.0}}}},
      {{"amplitude", {1.0, 1.0}}},
      {{"quad_nodes", 1}},
      {{"sigma_grid", {-0.1}}},
  };
  for (const auto& j : bad) {
    INFO(j.dump());
    CHECK_THROWS_AS(parse_experiment_config(j), ConfigError);
  }
  CHECK_NOTHROW(parse_experiment_config({{"description", "text"}, {"threads", 2}}));
}

TEST_CASE("noiseless demo peaks on the true delay") {
  auto cfg = parse_experiment_config(
      {{"experiment", "noiseless_demo"}, {"m", {10, 20, 50}}, {"trials", 30}, {"quad_nodes", 4096}});
  auto r = run_noiseless_demo(cfg);
  CHECK(r.rows.size() == 90);
  for (const auto& row : r.rows) {
    CHECK(row.tau_hat == 0.4);
    CHECK(row.err == 0.0);
  }
  REQUIRE(r.mean_gap.size() == 3);
  CHECK(r.mean_gap[0] < r.mean_gap[1]);
  CHECK(r.mean_gap[1] < r.mean_gap[2]);
  CHECK(r.example.size() == 3);
  auto eta = compute_metrics(cfg.make_template(), cfg.band, cfg.quadrature()).eta(1.0);
  CHECK(r.truth.values[1920].real() == doctest::Approx(eta).epsilon(1e-12));
}

TEST_CASE("sweep output is independent of the thread count") {
  auto cfg = small_sweep();
  auto one = sweep_csv(cfg, 1);
  CHECK(one == sweep_csv(cfg, 3));
  CHECK(one == sweep_csv(cfg, 0));
  CHECK(one.rfind("c,trial,tau_hat,err,success\n", 0) == 0);
}

TEST_CASE("sweep rows are ordered and replayable") {
  auto cfg = small_sweep();
  cfg.c_grid = {1.0, 0.0, 0.2};
  auto r = run_noise_sweep(cfg);
  REQUIRE(r.rows.size() == 120);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& a = r.rows[i - 1];
    const auto& b = r.rows[i];
    CHECK((a.c < b.c || (a.c == b.c && a.trial + 1 == b.trial)));
  }
  CHECK(r.levels[0].c == 0.0);
  CHECK(r.levels[0].success_rate == 1.0);
  for (const auto& l : r.levels) {
    CHECK(l.successes <= l.trials);
  }

  // Replay a single row from (seed, trial, c).
  auto t = cfg.make_template();
  for (std::size_t idx : {45, 97, 119}) {
    const auto& row = r.rows[idx];
    RngSpec seed{cfg.master_seed, row.trial};
    auto meas = synthesize_delay_measurements(t, {cfg.amplitude, cfg.tau0, row.c * r.sigma_unit}, cfg.band,
                                              draw_frequencies(cfg.band, cfg.m(), seed), seed);
    auto est = estimate_delay_amplitude(meas, t, cfg.window, cfg.resolved_grid_step());
    CHECK(est.tau_hat == row.tau_hat);
  }
}

TEST_CASE("half crossing") {
  std::vector<double> lv{0.0, 0.1, 0.2, 0.3};
  CHECK(*half_crossing(lv, std::vector<double>{1.0, 0.9, 0.3, 0.0}) == doctest::Approx(0.1 + 0.1 * 0.4 / 0.6));
  CHECK(*half_crossing(lv, std::vector<double>{0.2, 0.1, 0.0, 0.0}) == 0.0);
  CHECK_FALSE(half_crossing(lv, std::vector<double>{1.0, 1.0, 0.9, 0.6}).has_value());
  CHECK_THROWS_AS(half_crossing(lv, std::vector<double>{1.0}), InvalidParameter);
}

TEST_CASE("small bound check stays under the theory") {
  auto cfg = parse_experiment_config({{"experiment", "bound_check"},
                                      {"m", {10, 40}},
                                      {"trials", 30},
                                      {"fine_step", 1.0 / 2400.0},
                                      {"quad_nodes", 8192}});
  auto r = run_bound_check(cfg);
  CHECK(r.rows.size() == 60);
  REQUIRE(r.levels.size() == 2);
  for (const auto& l : r.levels) {
    CHECK(l.ratio < 1.0);
    CHECK(l.tail_fraction <= cfg.delta);
    CHECK(l.mean_sup_noise == 0.0);
  }
  CHECK(r.levels[0].mean_sup_clean > r.levels[1].mean_sup_clean);

  cfg.sigma_n = 0.5;
  cfg.m_values = {40};
  auto noisy = run_bound_check(cfg);
  CHECK(noisy.levels[0].mean_sup_noise > 0.0);
  CHECK(noisy.levels[0].mean_sup_noise < noisy.levels[0].noise_bound);
  CHECK(noisy.rows[0].theory_bound == doctest::Approx(noisy.levels[0].signal_bound + noisy.levels[0].noise_bound));
}

TEST_CASE("tone and chirp experiments are exact without noise") {
  auto tone = parse_experiment_config(
      {{"experiment", "tone"}, {"omega_max", 100.0}, {"window", {-1.0, 1.0}}, {"m", 30}, {"trials", 20}});
  auto rows = run_tone_experiment(tone);
  REQUIRE(rows.size() == 20);
  for (const auto& r : rows) {
    CHECK(r.err_grid <= std::numbers::pi);
    CHECK(r.err_refined <= 1e-9 * std::numbers::pi);
    CHECK(std::abs(r.omega0) <= 100.0);
  }
  CHECK(rows[0].omega0 != rows[1].omega0);

  auto chirp = parse_experiment_config({{"experiment", "chirp"},
                                        {"omega_max", 110.0},
                                        {"window", {-1.0, 1.0}},
                                        {"m", 40},
                                        {"trials", 10},
                                        {"chirp", {{"omega_c", 50.0}, {"alpha", 100.0}}}});
  auto crow = run_chirp_demo(chirp);
  for (const auto& r : crow) {
    CHECK(r.err <= 1e-8);
    CHECK(r.t0 >= 0.0);
    CHECK(r.t0 <= 1.0);
  }
}

TEST_CASE("baseline is perfect without noise") {
  auto cfg = parse_experiment_config({{"experiment", "nyquist_baseline"},
                                      {"template", {{"kind", "gaussian"}, {"a", 0.02}}},
                                      {"omega_max", 150.0},
                                      {"tau0", 0.5},
                                      {"m", 300},
                                      {"trials", 10},
                                      {"sigma_grid", {0.0, 0.5}},
                                      {"quad_nodes", 4096}});
  auto r = run_nyquist_baseline(cfg);
  REQUIRE(r.levels.size() == 2);
  CHECK(r.levels[0].baseline_rate == 1.0);
  CHECK(r.levels[0].compressive_rate == 1.0);
  CHECK(r.nyquist_samples == 48);
}

TEST_CASE("manifest carries the config hash and constants version") {
  auto cfg = small_sweep();
  auto m = run_manifest(cfg, {"sweep.csv"});
  CHECK(m["config_hash"] == config_hash(cfg.to_json()));
  CHECK(m["constants_version"] == std::string(kConstantsVersion));
  CHECK(m["master_seed"] == 17);
  CHECK(m["outputs"][0] == "sweep.csv");
  auto other = cfg;
  other.master_seed = 18;
  CHECK(run_manifest(other, {})["config_hash"] != m["config_hash"]);
  // The effective config parses back to the same hash.
  auto again = parse_experiment_config(cfg.to_json());
  CHECK(config_hash(again.to_json()) == m["config_hash"].get<std::string>());
}
