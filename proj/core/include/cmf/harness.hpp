#pragma once

// Monte Carlo experiments: noiseless peaking demos, noise sweeps, empirical
// bound checks, the Nyquist-rate baseline, and tone / chirp recovery.
//
// Trial i of every experiment draws from the stream (master_seed, i), so a
// single row can be replayed from the manifest seed and its trial index.
// Sweeps reuse the same trial samples for every noise level (common random
// numbers): the noisy trace is the clean trace plus sigma_n times the trace
// of the unit-noise vector, which is exactly linear in sigma_n.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmf/bounds.hpp"
#include "cmf/correlation.hpp"
#include "cmf/serialize.hpp"
#include "cmf/templates.hpp"
#include "cmf/tone.hpp"

namespace cmf {

enum class ExperimentKind { NoiselessDemo, NoiseSweep, BoundCheck, Tone, Chirp, NyquistBaseline };

std::string_view to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::NoiseSweep;
  json template_spec = {{"kind", "gaussian"}, {"a", 0.005}};
  FrequencyBand band{600.0};
  SearchWindow window{0.0, 1.0};
  complex amplitude{1.0, 0.0};
  double tau0 = 0.4;
  double sigma_n = 0.0;
  std::vector<std::size_t> m_values{50};
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
  std::vector<double> c_grid;  // empty: 0, 0.05, ..., 1
  std::optional<double> success_radius;
  std::optional<double> exclusion_radius;
  std::optional<double> grid_step;
  std::optional<double> fine_step;
  std::optional<double> alpha2;
  double delta = 0.1;
  double epsilon = 0.0;
  std::optional<double> omega0;  // tone truth; drawn uniformly on the band when absent
  ChirpSpec chirp{50.0, 100.0, 0.5, {1.0, 0.0}};
  bool random_t0 = true;
  std::pair<double, double> t0_range{0.0, 1.0};
  std::vector<double> sigma_grid;  // baseline levels in units of |A| ||s||_2
  std::size_t quad_nodes = std::size_t{1} << 16;
  unsigned threads = 0;

  Template make_template() const;
  QuadratureSpec quadrature() const { return {quad_nodes}; }
  std::size_t m() const { return m_values.front(); }
  /// Explicit grid_step, else min(alpha2/4, 1/(4|Omega|)).
  double resolved_grid_step() const;
  /// Explicit value, else 2a for a Gaussian pulse, else alpha2.
  double resolved_success_radius(const Template& t) const;
  /// Explicit value, else 3a for a Gaussian pulse, else alpha2.
  std::optional<double> resolved_exclusion_radius(const Template& t) const;
  std::vector<double> resolved_c_grid() const;
  /// Effective configuration with every default filled in; hashed into the manifest.
  json to_json() const;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
ExperimentConfig parse_experiment_config(const json& j);

// Noiseless demo --------------------------------------------------------------

struct DemoRow {
  std::size_t m = 0;
  std::size_t trial = 0;
  double tau_hat = 0.0;
  double err = 0.0;
  std::optional<double> gap;
};

struct NoiselessDemoResult {
  std::vector<DemoRow> rows;              // by m (config order), then trial
  std::vector<CorrelationTrace> example;  // trial 0 for each m
  CorrelationTrace truth;                 // A R_ss(tau - tau0) on the search grid
  std::vector<double> mean_gap;           // per m
};

NoiselessDemoResult run_noiseless_demo(const ExperimentConfig& cfg);

// Noise sweep -----------------------------------------------------------------

struct SweepRow {
  double c = 0.0;
  std::size_t trial = 0;
  double tau_hat = 0.0;
  double err = 0.0;
  bool success = false;
  std::optional<double> gap;
};

struct SweepLevel {
  double c = 0.0;
  double sigma_n = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_err = 0.0;
  double mean_gap = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // by c, then trial
  std::vector<SweepLevel> levels;
  double sigma_unit = 0.0;  // |A| ||s||_2 sqrt(m / |Omega|)
};

SweepResult run_noise_sweep(const ExperimentConfig& cfg);

// Bound check -----------------------------------------------------------------

struct BoundRow {
  std::size_t m = 0;
  std::size_t trial = 0;
  double sup_dev = 0.0;       // grid sup of |R~ - A R_ss| (noisy when sigma_n > 0)
  double sup_noise = 0.0;     // grid sup of the noise term alone
  double theory_bound = 0.0;  // simplified expectation bound (signal plus noise)
};

struct BoundLevel {
  std::size_t m = 0;
  double mean_sup_dev = 0.0;
  double mean_sup_clean = 0.0;
  double signal_bound = 0.0;  // simplified, noiseless deviation
  double ratio = 0.0;         // mean_sup_clean / signal_bound
  double mean_sup_noise = 0.0;
  double noise_bound = 0.0;
  double tail_U = 0.0;
  double tail_fraction = 0.0;  // fraction of clean sups above U
};

struct BoundCheckResult {
  std::vector<BoundRow> rows;
  std::vector<BoundLevel> levels;
};

BoundCheckResult run_bound_check(const ExperimentConfig& cfg);

// Nyquist baseline ------------------------------------------------------------

struct BaselineLevel {
  double level = 0.0;  // sigma_n / (|A| ||s||_2)
  double sigma_n = 0.0;
  double compressive_rate = 0.0;
  double baseline_rate = 0.0;
};

struct BaselineResult {
  std::vector<BaselineLevel> levels;
  std::optional<double> compressive_half;  // 50% success level, interpolated
  std::optional<double> baseline_half;
  std::size_t nyquist_samples = 0;
};

BaselineResult run_nyquist_baseline(const ExperimentConfig& cfg);

/// First crossing of `rates` below 0.5, linearly interpolated in `levels`.
std::optional<double> half_crossing(std::span<const double> levels, std::span<const double> rates);

// Tone and chirp --------------------------------------------------------------

struct ToneRow {
  std::size_t trial = 0;
  double omega0 = 0.0;
  double omega_hat_grid = 0.0;
  double omega_hat_refined = 0.0;
  double err_grid = 0.0;
  double err_refined = 0.0;
};

std::vector<ToneRow> run_tone_experiment(const ExperimentConfig& cfg);

struct ChirpRow {
  std::size_t trial = 0;
  double t0 = 0.0;
  double t0_hat = 0.0;
  double err = 0.0;
};

std::vector<ChirpRow> run_chirp_demo(const ExperimentConfig& cfg);

// Artifacts -------------------------------------------------------------------

void write_demo_csv(std::ostream& os, const NoiselessDemoResult& r);
void write_sweep_csv(std::ostream& os, const SweepResult& r);
void write_sweep_summary_csv(std::ostream& os, const SweepResult& r);
void write_bound_check_csv(std::ostream& os, const BoundCheckResult& r);
void write_bound_summary_csv(std::ostream& os, const BoundCheckResult& r);
void write_baseline_csv(std::ostream& os, const BaselineResult& r);
void write_tone_csv(std::ostream& os, const std::vector<ToneRow>& rows);
void write_chirp_csv(std::ostream& os, const std::vector<ChirpRow>& rows);

/// Config hash, constants version, seed, trial count and the emitted files.
json run_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& outputs);

}  // namespace cmf
