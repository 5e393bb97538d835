#include "cmf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>

#include "cmf/errors.hpp"
#include "cmf/parallel.hpp"
#include "cmf/rng.hpp"
#include "cmf/sampling.hpp"
#include "cmf/waveform.hpp"

namespace cmf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::string_view kToolVersion = "0.3.0";
// Keeps baseline noise streams apart from the compressive ones.
constexpr std::uint64_t kBaselineSeedTag = 0x4241534531494e45ULL;

complex fold(complex x, SignalCase c) { return c == SignalCase::Real ? complex{x.real(), 0.0} : x; }

RngSpec trial_seed(const ExperimentConfig& cfg, std::size_t trial) { return {cfg.master_seed, trial}; }

template <class T>
T read(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field \"") + key + "\": " + e.what());
  }
}

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return read<double>(j, key);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Clean and unit-noise traces of one delay trial on `grid`.
struct DelayTrialTraces {
  DelayMeasurements clean;
  CorrelationTrace clean_trace;
  CorrelationTrace noise_trace;  // trace of the unit-noise vector alone
};

DelayTrialTraces delay_trial(const ExperimentConfig& cfg, const Template& t, std::size_t m, std::size_t trial,
                             const UniformGrid& grid, bool with_noise) {
  RngSpec seed = trial_seed(cfg, trial);
  auto freqs = draw_frequencies(cfg.band, m, seed);
  DelayScene scene{cfg.amplitude, cfg.tau0, 0.0};
  DelayTrialTraces out{synthesize_delay_measurements(t, scene, cfg.band, freqs, seed), {}, {}};
  out.clean_trace = acf_estimate(out.clean, t, grid);
  if (with_noise) {
    DelayMeasurements noise{std::move(freqs), unit_noise(m, seed), cfg.band, seed};
    out.noise_trace = acf_estimate(noise, t, grid);
  }
  return out;
}

// Grid argmax of |clean + sigma * noise|, ties to the smallest tau.
GridPeak combined_peak(const CorrelationTrace& clean, const CorrelationTrace* noise, double sigma) {
  GridPeak best{0, clean.taus[0], -1.0};
  for (std::size_t i = 0; i < clean.size(); ++i) {
    complex v = clean.values[i];
    if (noise != nullptr && sigma > 0.0) {
      v += sigma * noise->values[i];
    }
    double a = std::abs(v);
    if (a > best.magnitude) {
      best = {i, clean.taus[i], a};
    }
  }
  return best;
}

CorrelationTrace combined_trace(const CorrelationTrace& clean, const CorrelationTrace& noise, double sigma) {
  CorrelationTrace tr = clean;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    tr.values[i] += sigma * noise.values[i];
  }
  return tr;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) {
    return 0.0;
  }
  double s = 0.0;
  for (double x : v) {
    s += x;
  }
  return s / static_cast<double>(v.size());
}

UniformGrid search_grid(const ExperimentConfig& cfg) {
  return UniformGrid::spanning(cfg.window.tau_min(), cfg.window.tau_max(), cfg.resolved_grid_step());
}

void require_window_contains_tau0(const ExperimentConfig& cfg) {
  if (!cfg.window.contains(cfg.tau0)) {
    throw ConfigError("tau0 must lie inside the search window");
  }
}

std::string opt_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::NoiselessDemo:
      return "noiseless_demo";
    case ExperimentKind::NoiseSweep:
      return "noise_sweep";
    case ExperimentKind::BoundCheck:
      return "bound_check";
    case ExperimentKind::Tone:
      return "tone";
    case ExperimentKind::Chirp:
      return "chirp";
    case ExperimentKind::NyquistBaseline:
      return "nyquist_baseline";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (auto k : {ExperimentKind::NoiselessDemo, ExperimentKind::NoiseSweep, ExperimentKind::BoundCheck,
                 ExperimentKind::Tone, ExperimentKind::Chirp, ExperimentKind::NyquistBaseline}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw ConfigError("unknown experiment \"" + std::string(name) + "\"");
}

Template ExperimentConfig::make_template() const { return template_from_json(template_spec, band); }

double ExperimentConfig::resolved_grid_step() const {
  return grid_step ? *grid_step : default_grid_step(band, alpha2);
}

double ExperimentConfig::resolved_success_radius(const Template& t) const {
  if (success_radius) {
    return *success_radius;
  }
  if (auto a = t.gaussian_width()) {
    return 2.0 * *a;
  }
  if (alpha2) {
    return *alpha2;
  }
  throw ConfigError("success_radius or alpha2 is required for non-gaussian templates");
}

std::optional<double> ExperimentConfig::resolved_exclusion_radius(const Template& t) const {
  if (exclusion_radius) {
    return exclusion_radius;
  }
  if (auto a = t.gaussian_width()) {
    return 3.0 * *a;
  }
  return alpha2;
}

std::vector<double> ExperimentConfig::resolved_c_grid() const {
  if (!c_grid.empty()) {
    return c_grid;
  }
  std::vector<double> out;
  for (int i = 0; i <= 20; ++i) {
    out.push_back(0.05 * i);
  }
  return out;
}

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = std::string(to_string(kind));
  j["template"] = template_spec;
  j["omega_max"] = band.omega_max();
  j["window"] = {window.tau_min(), window.tau_max()};
  j["amplitude"] = complex_to_json(amplitude);
  j["tau0"] = tau0;
  j["sigma_n"] = sigma_n;
  j["m"] = m_values;
  j["trials"] = trials;
  j["seed"] = master_seed;
  j["c_grid"] = resolved_c_grid();
  j["success_radius"] = optional_json(success_radius);
  j["exclusion_radius"] = optional_json(exclusion_radius);
  j["grid_step"] = resolved_grid_step();
  j["fine_step"] = optional_json(fine_step);
  j["alpha2"] = optional_json(alpha2);
  j["delta"] = delta;
  j["epsilon"] = epsilon;
  j["omega0"] = optional_json(omega0);
  j["chirp"] = chirp_to_json(chirp);
  j["random_t0"] = random_t0;
  j["t0_range"] = {t0_range.first, t0_range.second};
  j["sigma_grid"] = sigma_grid;
  j["quad_nodes"] = quad_nodes;
  return j;
}

ExperimentConfig parse_experiment_config(const json& j) {
  if (!j.is_object()) {
    throw ConfigError("configuration must be a JSON object");
  }
  static const std::set<std::string> known{
      "experiment", "template",  "omega_max",  "window",   "amplitude",        "tau0",         "sigma_n",
      "m",          "trials",    "seed",       "c_grid",   "success_radius",   "exclusion_radius",
      "grid_step",  "fine_step", "alpha2",     "delta",    "epsilon",          "omega0",       "chirp",
      "t0_range",   "sigma_grid", "quad_nodes", "threads", "description",      "random_t0"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown configuration key \"" + key + "\"");
    }
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("experiment")) {
      cfg.kind = experiment_kind_from_string(read<std::string>(j, "experiment"));
    }
    if (j.contains("template")) {
      cfg.template_spec = j.at("template");
    }
    if (j.contains("omega_max")) {
      cfg.band = FrequencyBand(read<double>(j, "omega_max"));
    }
    if (j.contains("window")) {
      auto w = read<std::vector<double>>(j, "window");
      if (w.size() != 2) {
        throw ConfigError("window must be [lo, hi]");
      }
      cfg.window = SearchWindow(w[0], w[1]);
    }
    if (j.contains("amplitude")) {
      cfg.amplitude = complex_from_json(j.at("amplitude"));
    }
    if (j.contains("tau0")) {
      cfg.tau0 = read<double>(j, "tau0");
    }
    if (j.contains("sigma_n")) {
      cfg.sigma_n = read<double>(j, "sigma_n");
    }
    if (j.contains("m")) {
      cfg.m_values = j.at("m").is_array() ? read<std::vector<std::size_t>>(j, "m")
                                          : std::vector<std::size_t>{read<std::size_t>(j, "m")};
    }
    if (j.contains("trials")) {
      cfg.trials = read<std::size_t>(j, "trials");
    }
    if (j.contains("seed")) {
      cfg.master_seed = read<std::uint64_t>(j, "seed");
    }
    if (j.contains("c_grid")) {
      cfg.c_grid = read<std::vector<double>>(j, "c_grid");
    }
    cfg.success_radius = read_optional(j, "success_radius");
    cfg.exclusion_radius = read_optional(j, "exclusion_radius");
    cfg.grid_step = read_optional(j, "grid_step");
    cfg.fine_step = read_optional(j, "fine_step");
    cfg.alpha2 = read_optional(j, "alpha2");
    cfg.omega0 = read_optional(j, "omega0");
    if (j.contains("delta")) {
      cfg.delta = read<double>(j, "delta");
    }
    if (j.contains("epsilon")) {
      cfg.epsilon = read<double>(j, "epsilon");
    }
    if (j.contains("chirp")) {
      cfg.chirp = chirp_from_json(j.at("chirp"));
      cfg.random_t0 = !j.at("chirp").contains("t0");
    }
    if (j.contains("random_t0")) {
      cfg.random_t0 = read<bool>(j, "random_t0");
    }
    if (j.contains("t0_range")) {
      auto r = read<std::vector<double>>(j, "t0_range");
      if (r.size() != 2 || !(r[1] >= r[0])) {
        throw ConfigError("t0_range must be [lo, hi] with lo <= hi");
      }
      cfg.t0_range = {r[0], r[1]};
    }
    if (j.contains("sigma_grid")) {
      cfg.sigma_grid = read<std::vector<double>>(j, "sigma_grid");
    }
    if (j.contains("quad_nodes")) {
      cfg.quad_nodes = read<std::size_t>(j, "quad_nodes");
    }
    if (j.contains("threads")) {
      cfg.threads = read<unsigned>(j, "threads");
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }

  if (cfg.trials < 1) {
    throw ConfigError("trials must be at least 1");
  }
  if (cfg.m_values.empty() || std::find(cfg.m_values.begin(), cfg.m_values.end(), 0) != cfg.m_values.end()) {
    throw ConfigError("m must list positive sample counts");
  }
  for (double c : cfg.c_grid) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw ConfigError("c_grid values must lie in [0, 1]");
    }
  }
  for (double s : cfg.sigma_grid) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw ConfigError("sigma_grid values must be finite and nonnegative");
    }
  }
  if (!(cfg.sigma_n >= 0.0) || !std::isfinite(cfg.sigma_n)) {
    throw ConfigError("sigma_n must be finite and nonnegative");
  }
  if (cfg.grid_step && !(*cfg.grid_step > 0.0)) {
    throw ConfigError("grid_step must be positive");
  }
  if (cfg.fine_step && !(*cfg.fine_step > 0.0)) {
    throw ConfigError("fine_step must be positive");
  }
  if (cfg.quad_nodes < 2) {
    throw ConfigError("quad_nodes must be at least 2");
  }
  try {
    Template t = cfg.make_template();
    if (t.is_real() && cfg.amplitude.imag() != 0.0) {
      throw ConfigError("real templates need a real amplitude");
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("template: ") + e.what());
  }
  return cfg;
}

// Noiseless demo --------------------------------------------------------------

NoiselessDemoResult run_noiseless_demo(const ExperimentConfig& cfg) {
  require_window_contains_tau0(cfg);
  Template t = cfg.make_template();
  auto grid = search_grid(cfg);
  auto exclusion = cfg.resolved_exclusion_radius(t);

  NoiselessDemoResult out;
  out.truth.taus = grid.points();
  out.truth.values = mean_function(t, cfg.band, cfg.amplitude, cfg.tau0, out.truth.taus, cfg.quadrature());
  out.truth.scale = 1.0;
  out.truth.signal_case = t.signal_case();

  for (std::size_t m : cfg.m_values) {
    std::vector<DemoRow> rows(cfg.trials);
    CorrelationTrace example;
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
      auto tr = delay_trial(cfg, t, m, trial, grid, false);
      GridPeak peak = grid_search(tr.clean_trace);
      DemoRow row{m, trial, peak.tau, std::abs(peak.tau - cfg.tau0), std::nullopt};
      if (exclusion) {
        row.gap = runner_up_gap(tr.clean_trace, peak, *exclusion);
      }
      rows[trial] = row;
      if (trial == 0) {
        example = std::move(tr.clean_trace);
      }
    });
    std::vector<double> gaps;
    for (const auto& r : rows) {
      if (r.gap) {
        gaps.push_back(*r.gap);
      }
    }
    out.mean_gap.push_back(mean_of(gaps));
    out.example.push_back(std::move(example));
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }
  return out;
}

// Noise sweep -----------------------------------------------------------------

SweepResult run_noise_sweep(const ExperimentConfig& cfg) {
  require_window_contains_tau0(cfg);
  Template t = cfg.make_template();
  auto grid = search_grid(cfg);
  auto metrics = compute_metrics(t, cfg.band, cfg.quadrature());
  const std::size_t m = cfg.m();
  const double radius = cfg.resolved_success_radius(t);
  const auto exclusion = cfg.resolved_exclusion_radius(t);
  const auto cs = cfg.resolved_c_grid();

  SweepResult out;
  out.sigma_unit = std::abs(cfg.amplitude) * metrics.l2() * std::sqrt(static_cast<double>(m) / cfg.band.width());

  // rows[ci * trials + trial]
  out.rows.resize(cs.size() * cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
    auto tr = delay_trial(cfg, t, m, trial, grid, true);
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      double sigma = cs[ci] * out.sigma_unit;
      GridPeak peak = combined_peak(tr.clean_trace, &tr.noise_trace, sigma);
      SweepRow row{cs[ci], trial, peak.tau, std::abs(peak.tau - cfg.tau0), false, std::nullopt};
      row.success = row.err <= radius;
      if (exclusion) {
        row.gap = runner_up_gap(combined_trace(tr.clean_trace, tr.noise_trace, sigma), peak, *exclusion);
      }
      out.rows[ci * cfg.trials + trial] = row;
    }
  });

  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    SweepLevel lvl;
    lvl.c = cs[ci];
    lvl.sigma_n = cs[ci] * out.sigma_unit;
    lvl.trials = cfg.trials;
    std::vector<double> errs, gaps;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      const auto& r = out.rows[ci * cfg.trials + trial];
      lvl.successes += r.success ? 1 : 0;
      errs.push_back(r.err);
      if (r.gap) {
        gaps.push_back(*r.gap);
      }
    }
    lvl.success_rate = static_cast<double>(lvl.successes) / static_cast<double>(lvl.trials);
    lvl.mean_err = mean_of(errs);
    lvl.mean_gap = mean_of(gaps);
    out.levels.push_back(lvl);
  }
  // Stable sort keeps trial order inside each c even if the grid is unsorted.
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.c < b.c; });
  std::stable_sort(out.levels.begin(), out.levels.end(),
                   [](const SweepLevel& a, const SweepLevel& b) { return a.c < b.c; });
  return out;
}

// Bound check -----------------------------------------------------------------

BoundCheckResult run_bound_check(const ExperimentConfig& cfg) {
  require_window_contains_tau0(cfg);
  Template t = cfg.make_template();
  const double fine = cfg.fine_step ? *cfg.fine_step : 1.0 / (4.0 * cfg.band.width());
  auto grid = UniformGrid::spanning(cfg.window.tau_min(), cfg.window.tau_max(), fine);
  auto taus = grid.points();
  auto mean = mean_function(t, cfg.band, cfg.amplitude, cfg.tau0, taus, cfg.quadrature());
  const bool noisy = cfg.sigma_n > 0.0;

  ProblemConfig pc;
  pc.metrics = compute_metrics(t, cfg.band, cfg.quadrature());
  pc.band = cfg.band;
  pc.window = cfg.window;
  pc.amp = std::abs(cfg.amplitude);
  pc.sigma_n = cfg.sigma_n;
  pc.delta = cfg.delta;

  BoundCheckResult out;
  for (std::size_t m : cfg.m_values) {
    pc.m = m;
    BoundLevel lvl;
    lvl.m = m;
    lvl.signal_bound = expected_sup_bound(pc).simplified;
    lvl.noise_bound = noise_expected_sup_bound(pc).simplified;
    lvl.tail_U = tail_threshold_U(pc).tightest();

    std::vector<BoundRow> rows(cfg.trials);
    std::vector<double> clean_sups(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
      auto tr = delay_trial(cfg, t, m, trial, grid, noisy);
      BoundRow row{m, trial, 0.0, 0.0, lvl.signal_bound + (noisy ? lvl.noise_bound : 0.0)};
      clean_sups[trial] = deviation_supremum(tr.clean_trace, mean);
      if (noisy) {
        auto total = combined_trace(tr.clean_trace, tr.noise_trace, cfg.sigma_n);
        row.sup_dev = deviation_supremum(total, mean);
        double worst = 0.0;
        for (const auto& v : tr.noise_trace.values) {
          worst = std::max(worst, std::abs(v));
        }
        row.sup_noise = cfg.sigma_n * worst;
      } else {
        row.sup_dev = clean_sups[trial];
      }
      rows[trial] = row;
    });

    std::vector<double> devs, noises;
    std::size_t above = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      devs.push_back(rows[i].sup_dev);
      noises.push_back(rows[i].sup_noise);
      above += clean_sups[i] > lvl.tail_U ? 1 : 0;
    }
    lvl.mean_sup_dev = mean_of(devs);
    lvl.mean_sup_clean = mean_of(clean_sups);
    lvl.mean_sup_noise = mean_of(noises);
    lvl.ratio = lvl.mean_sup_clean / lvl.signal_bound;
    lvl.tail_fraction = static_cast<double>(above) / static_cast<double>(cfg.trials);
    out.levels.push_back(lvl);
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }
  return out;
}

// Nyquist baseline ------------------------------------------------------------

std::optional<double> half_crossing(std::span<const double> levels, std::span<const double> rates) {
  if (levels.size() != rates.size()) {
    throw InvalidParameter("levels and rates differ in length");
  }
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i] < 0.5) {
      if (i == 0) {
        return levels[0];
      }
      double f = (rates[i - 1] - 0.5) / (rates[i - 1] - rates[i]);
      return levels[i - 1] + f * (levels[i] - levels[i - 1]);
    }
  }
  return std::nullopt;
}

BaselineResult run_nyquist_baseline(const ExperimentConfig& cfg) {
  require_window_contains_tau0(cfg);
  Template t = cfg.make_template();
  auto grid = search_grid(cfg);
  auto taus = grid.points();
  const auto metrics = compute_metrics(t, cfg.band, cfg.quadrature());
  const double unit = std::abs(cfg.amplitude) * metrics.l2();
  const double radius = cfg.resolved_success_radius(t);
  const std::size_t m = cfg.m();
  const SignalCase sc = t.signal_case();

  std::vector<double> levels = cfg.sigma_grid;
  if (levels.empty()) {
    for (int i = 0; i <= 100; ++i) {
      levels.push_back(0.02 * i);
    }
  }
  std::sort(levels.begin(), levels.end());

  // Reference waveforms s(t_l - tau_j), stored per grid point.
  const auto times = nyquist_times(cfg.band, cfg.window);
  if (times.empty()) {
    throw ConfigError("window holds no Nyquist sample instants");
  }
  const double span = cfg.window.length();
  WaveformTable table(t, cfg.band, -span, span);
  const std::size_t L = times.size();
  const std::size_t G = taus.size();
  std::vector<complex> ref_conj(L * G);
  for (std::size_t j = 0; j < G; ++j) {
    for (std::size_t l = 0; l < L; ++l) {
      ref_conj[j * L + l] = std::conj(table(times[l] - taus[j]));
    }
  }
  auto correlate = [&](const std::vector<complex>& y, std::vector<complex>& out) {
    out.assign(G, complex{});
    for (std::size_t j = 0; j < G; ++j) {
      complex s{0.0, 0.0};
      const complex* r = &ref_conj[j * L];
      for (std::size_t l = 0; l < L; ++l) {
        s += y[l] * r[l];
      }
      out[j] = fold(s, sc);
    }
  };
  std::vector<complex> y_clean(L);
  for (std::size_t l = 0; l < L; ++l) {
    y_clean[l] = cfg.amplitude * table(times[l] - cfg.tau0);
  }
  CorrelationTrace base_clean;
  base_clean.taus = taus;
  correlate(y_clean, base_clean.values);
  // Per-sample noise variance sigma^2 |Omega| / 2pi.
  const double noise_gain = std::sqrt(cfg.band.width() / (2.0 * kPi));

  std::vector<std::size_t> comp_hits(cfg.trials * levels.size());
  std::vector<std::size_t> base_hits(cfg.trials * levels.size());
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
    auto tr = delay_trial(cfg, t, m, trial, grid, true);
    CorrelationTrace base_noise;
    base_noise.taus = taus;
    auto n = unit_noise(L, RngSpec{mix64(cfg.master_seed ^ kBaselineSeedTag), trial});
    for (auto& v : n) {
      v *= noise_gain;
    }
    correlate(n, base_noise.values);
    for (std::size_t li = 0; li < levels.size(); ++li) {
      double sigma = levels[li] * unit;
      auto pc = combined_peak(tr.clean_trace, &tr.noise_trace, sigma);
      auto pb = combined_peak(base_clean, &base_noise, sigma);
      comp_hits[trial * levels.size() + li] = std::abs(pc.tau - cfg.tau0) <= radius ? 1 : 0;
      base_hits[trial * levels.size() + li] = std::abs(pb.tau - cfg.tau0) <= radius ? 1 : 0;
    }
  });

  BaselineResult out;
  out.nyquist_samples = L;
  std::vector<double> comp_rates, base_rates;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    std::size_t c = 0, b = 0;
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      c += comp_hits[trial * levels.size() + li];
      b += base_hits[trial * levels.size() + li];
    }
    double n = static_cast<double>(cfg.trials);
    out.levels.push_back({levels[li], levels[li] * unit, static_cast<double>(c) / n, static_cast<double>(b) / n});
    comp_rates.push_back(out.levels.back().compressive_rate);
    base_rates.push_back(out.levels.back().baseline_rate);
  }
  out.compressive_half = half_crossing(levels, comp_rates);
  out.baseline_half = half_crossing(levels, base_rates);
  return out;
}

// Tone and chirp --------------------------------------------------------------

std::vector<ToneRow> run_tone_experiment(const ExperimentConfig& cfg) {
  const std::size_t m = cfg.m();
  std::vector<ToneRow> rows(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
    RngSpec seed = trial_seed(cfg, trial);
    double omega0 = cfg.omega0 ? *cfg.omega0 : CounterRng(seed, StreamPurpose::Truth).uniform(cfg.band.lo(), cfg.band.hi());
    auto times = draw_times(cfg.window, m, seed);
    auto meas = synthesize_tone_measurements(omega0, cfg.amplitude, cfg.sigma_n, cfg.window, std::move(times), seed);
    auto est = estimate_tone(meas, cfg.band);
    rows[trial] = {trial, omega0, est.grid_point, est.omega_hat, std::abs(est.grid_point - omega0),
                   std::abs(est.omega_hat - omega0)};
  });
  return rows;
}

std::vector<ChirpRow> run_chirp_demo(const ExperimentConfig& cfg) {
  if (cfg.chirp.alpha == 0.0) {
    throw ConfigError("chirp alpha must be nonzero");
  }
  const std::size_t m = cfg.m();
  std::vector<ChirpRow> rows(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
    RngSpec seed = trial_seed(cfg, trial);
    ChirpSpec chirp = cfg.chirp;
    if (cfg.random_t0) {
      chirp.t0 = CounterRng(seed, StreamPurpose::Truth).uniform(cfg.t0_range.first, cfg.t0_range.second);
    }
    auto times = draw_times(cfg.window, m, seed);
    auto samples = chirp_samples(chirp, times, cfg.sigma_n, seed);
    double t0_hat = estimate_chirp_toa(times, samples, chirp.omega_c, chirp.alpha, cfg.band, cfg.window,
                                       default_tone_tolerance(cfg.window));
    rows[trial] = {trial, chirp.t0, t0_hat, std::abs(t0_hat - chirp.t0)};
  });
  return rows;
}

// Artifacts -------------------------------------------------------------------

void write_demo_csv(std::ostream& os, const NoiselessDemoResult& r) {
  os << "m,trial,tau_hat,err,runner_up_gap\n";
  for (const auto& row : r.rows) {
    os << row.m << ',' << row.trial << ',' << format_double(row.tau_hat) << ',' << format_double(row.err) << ','
       << opt_text(row.gap) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "c,trial,tau_hat,err,success\n";
  for (const auto& row : r.rows) {
    os << format_double(row.c) << ',' << row.trial << ',' << format_double(row.tau_hat) << ','
       << format_double(row.err) << ',' << (row.success ? 1 : 0) << '\n';
  }
}

void write_sweep_summary_csv(std::ostream& os, const SweepResult& r) {
  os << "c,sigma_n,trials,successes,success_rate,mean_err,mean_runner_up_gap\n";
  for (const auto& l : r.levels) {
    os << format_double(l.c) << ',' << format_double(l.sigma_n) << ',' << l.trials << ',' << l.successes << ','
       << format_double(l.success_rate) << ',' << format_double(l.mean_err) << ',' << format_double(l.mean_gap)
       << '\n';
  }
}

void write_bound_check_csv(std::ostream& os, const BoundCheckResult& r) {
  os << "m,trial,sup_dev,theory_bound\n";
  for (const auto& row : r.rows) {
    os << row.m << ',' << row.trial << ',' << format_double(row.sup_dev) << ',' << format_double(row.theory_bound)
       << '\n';
  }
}

void write_bound_summary_csv(std::ostream& os, const BoundCheckResult& r) {
  os << "m,mean_sup_dev,mean_sup_clean,signal_bound,ratio,mean_sup_noise,noise_bound,tail_U,tail_fraction\n";
  for (const auto& l : r.levels) {
    os << l.m << ',' << format_double(l.mean_sup_dev) << ',' << format_double(l.mean_sup_clean) << ','
       << format_double(l.signal_bound) << ',' << format_double(l.ratio) << ',' << format_double(l.mean_sup_noise)
       << ',' << format_double(l.noise_bound) << ',' << format_double(l.tail_U) << ','
       << format_double(l.tail_fraction) << '\n';
  }
}

void write_baseline_csv(std::ostream& os, const BaselineResult& r) {
  os << "level,sigma_n,compressive_rate,baseline_rate\n";
  for (const auto& l : r.levels) {
    os << format_double(l.level) << ',' << format_double(l.sigma_n) << ',' << format_double(l.compressive_rate)
       << ',' << format_double(l.baseline_rate) << '\n';
  }
}

void write_tone_csv(std::ostream& os, const std::vector<ToneRow>& rows) {
  os << "trial,omega_hat_grid,omega_hat_refined,err_grid,err_refined\n";
  for (const auto& r : rows) {
    os << r.trial << ',' << format_double(r.omega_hat_grid) << ',' << format_double(r.omega_hat_refined) << ','
       << format_double(r.err_grid) << ',' << format_double(r.err_refined) << '\n';
  }
}

void write_chirp_csv(std::ostream& os, const std::vector<ChirpRow>& rows) {
  os << "trial,t0,t0_hat,err\n";
  for (const auto& r : rows) {
    os << r.trial << ',' << format_double(r.t0) << ',' << format_double(r.t0_hat) << ',' << format_double(r.err)
       << '\n';
  }
}

json run_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
  json config = cfg.to_json();
  return {{"tool", "cmf"},
          {"version", std::string(kToolVersion)},
          {"experiment", std::string(to_string(cfg.kind))},
          {"config_hash", config_hash(config)},
          {"constants_version", std::string(kConstantsVersion)},
          {"master_seed", cfg.master_seed},
          {"trials", cfg.trials},
          {"stream_rule", "trial i uses stream (master_seed, i)"},
          {"outputs", outputs},
          {"config", config}};
}

}  // namespace cmf
