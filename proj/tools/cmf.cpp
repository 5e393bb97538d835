// Command line front end for the compressive matched filter toolkit.
//
//   cmf template|simulate|sweep|bounds|tone|chirp|baseline --config cfg.json
//       [--seed N] [--trials N] [--out dir] [--threads N]
//
// Exit status: 0 success, 2 configuration error, 3 degenerate measurement.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "cmf/bounds.hpp"
#include "cmf/correlation.hpp"
#include "cmf/errors.hpp"
#include "cmf/harness.hpp"
#include "cmf/sampling.hpp"
#include "cmf/serialize.hpp"
#include "cmf/templates.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> threads;
  std::string out_dir = ".";
};

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) {
      throw std::runtime_error("cannot open " + (dir_ / name).string());
    }
    body(os);
    names_.push_back(name);
  }

  void write_json(const std::string& name, const cmf::json& j) {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }

  void manifest(const cmf::ExperimentConfig& cfg) {
    auto m = cmf::run_manifest(cfg, names_);
    std::ofstream os(dir_ / "manifest.json", std::ios::binary);
    os << m.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

cmf::ExperimentConfig load_config(const Options& opt) {
  std::ifstream in(opt.config_path);
  if (!in) {
    throw cmf::ConfigError("cannot read config file " + opt.config_path);
  }
  cmf::json doc;
  try {
    doc = cmf::json::parse(in);
  } catch (const cmf::json::parse_error& e) {
    throw cmf::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  auto cfg = cmf::parse_experiment_config(doc);
  if (opt.seed) {
    cfg.master_seed = *opt.seed;
  }
  if (opt.trials) {
    if (*opt.trials == 0) {
      throw cmf::ConfigError("--trials must be at least 1");
    }
    cfg.trials = *opt.trials;
  }
  if (opt.threads) {
    cfg.threads = *opt.threads;
  }
  return cfg;
}

double default_alpha2(const cmf::ExperimentConfig& cfg, const cmf::Template& t) {
  if (cfg.alpha2) {
    return *cfg.alpha2;
  }
  if (auto a = t.gaussian_width()) {
    return 3.0 * *a;
  }
  return 2.0 * std::numbers::pi / cfg.band.omega_max();
}

void cmd_template(const cmf::ExperimentConfig& cfg, Outputs& out) {
  auto t = cfg.make_template();
  auto metrics = cmf::compute_metrics(t, cfg.band, cfg.quadrature());
  double alpha2 = default_alpha2(cfg, t);
  cmf::json j{{"template", cmf::template_to_json(t)},
              {"case", t.is_real() ? "real" : "complex"},
              {"approximate", t.approximate()},
              {"omega_max", cfg.band.omega_max()},
              {"metrics", cmf::metrics_to_json(metrics)},
              {"R0", cmf::autocorrelation(t, cfg.band, 0.0, cfg.quadrature()).real()},
              {"alpha2", alpha2},
              {"alpha1", cmf::lobe_profile(t, cfg.band, alpha2, cmf::LobeScan::over(cfg.window), cfg.quadrature())}};
  out.write_json("template.json", j);
  std::cout << j.dump(2) << '\n';
}

void cmd_simulate(const cmf::ExperimentConfig& cfg, Outputs& out) {
  auto t = cfg.make_template();
  auto grid = cmf::UniformGrid::spanning(cfg.window.tau_min(), cfg.window.tau_max(), cfg.resolved_grid_step());
  cmf::json summary = cmf::json::array();
  for (std::size_t m : cfg.m_values) {
    cmf::RngSpec seed{cfg.master_seed, 0};
    auto freqs = cmf::draw_frequencies(cfg.band, m, seed);
    auto meas = cmf::synthesize_delay_measurements(t, {cfg.amplitude, cfg.tau0, cfg.sigma_n}, cfg.band,
                                                   std::move(freqs), seed);
    auto trace = cmf::acf_estimate(meas, t, grid);
    auto est = cmf::estimate_from_trace(trace, meas, t, cfg.resolved_exclusion_radius(t));
    std::string tag = "m" + std::to_string(m);
    out.write_json("measurements_" + tag + ".json", cmf::measurements_to_json(meas));
    out.write("trace_" + tag + ".csv", [&](std::ostream& os) { cmf::write_trace_csv(os, trace); });
    cmf::json e{{"m", m},
                {"tau_hat", est.tau_hat},
                {"amplitude_hat", cmf::complex_to_json(est.amplitude_hat)},
                {"peak_value", est.peak_value}};
    e["runner_up_gap"] = est.runner_up_gap ? cmf::json(*est.runner_up_gap) : cmf::json(nullptr);
    summary.push_back(e);
  }
  if (cfg.sigma_n == 0.0) {
    auto demo = cmf::run_noiseless_demo(cfg);
    out.write("truth.csv", [&](std::ostream& os) { cmf::write_trace_csv(os, demo.truth); });
    out.write("demo.csv", [&](std::ostream& os) { cmf::write_demo_csv(os, demo); });
  }
  out.write_json("estimates.json", summary);
  std::cout << summary.dump(2) << '\n';
}

void cmd_sweep(const cmf::ExperimentConfig& cfg, Outputs& out) {
  auto r = cmf::run_noise_sweep(cfg);
  out.write("sweep.csv", [&](std::ostream& os) { cmf::write_sweep_csv(os, r); });
  out.write("sweep_summary.csv", [&](std::ostream& os) { cmf::write_sweep_summary_csv(os, r); });
  cmf::write_sweep_summary_csv(std::cout, r);
}

void cmd_bounds(const cmf::ExperimentConfig& cfg, Outputs& out) {
  auto t = cfg.make_template();
  double alpha2 = default_alpha2(cfg, t);
  auto pc = cmf::make_problem(t, cfg.band, cfg.window, cfg.m(), cfg.delta, std::abs(cfg.amplitude), cfg.sigma_n,
                              alpha2, cfg.epsilon, cfg.quadrature());
  auto report = cmf::report_to_json(cmf::make_report(pc));
  out.write_json("bounds.json", report);
  std::cout << report.dump(2) << '\n';
  if (cfg.kind == cmf::ExperimentKind::BoundCheck) {
    auto r = cmf::run_bound_check(cfg);
    out.write("bound_check.csv", [&](std::ostream& os) { cmf::write_bound_check_csv(os, r); });
    out.write("bound_summary.csv", [&](std::ostream& os) { cmf::write_bound_summary_csv(os, r); });
    cmf::write_bound_summary_csv(std::cout, r);
  }
}

void cmd_tone(const cmf::ExperimentConfig& cfg, Outputs& out) {
  auto rows = cmf::run_tone_experiment(cfg);
  out.write("tone.csv", [&](std::ostream& os) { cmf::write_tone_csv(os, rows); });
  double tol = 2.0 * std::numbers::pi / cfg.window.length();
  std::size_t grid_ok = 0;
  double worst = 0.0;
  for (const auto& r : rows) {
    grid_ok += r.err_grid <= tol ? 1 : 0;
    worst = std::max(worst, r.err_refined);
  }
  std::cout << "trials " << rows.size() << ", grid within 2pi/|T|: " << grid_ok << ", worst refined error "
            << cmf::format_double(worst) << '\n';
}

void cmd_chirp(const cmf::ExperimentConfig& cfg, Outputs& out) {
  auto rows = cmf::run_chirp_demo(cfg);
  out.write_json("chirp.json", cmf::chirp_to_json(cfg.chirp));
  out.write("chirp.csv", [&](std::ostream& os) { cmf::write_chirp_csv(os, rows); });
  double worst = 0.0;
  for (const auto& r : rows) {
    worst = std::max(worst, r.err);
  }
  std::cout << "trials " << rows.size() << ", worst |t0_hat - t0| " << cmf::format_double(worst) << '\n';
}

void cmd_baseline(const cmf::ExperimentConfig& cfg, Outputs& out) {
  auto r = cmf::run_nyquist_baseline(cfg);
  out.write("baseline.csv", [&](std::ostream& os) { cmf::write_baseline_csv(os, r); });
  cmf::json j{{"nyquist_samples", r.nyquist_samples}, {"m", cfg.m()}};
  j["compressive_half"] = r.compressive_half ? cmf::json(*r.compressive_half) : cmf::json(nullptr);
  j["baseline_half"] = r.baseline_half ? cmf::json(*r.baseline_half) : cmf::json(nullptr);
  out.write_json("baseline_summary.json", j);
  std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressive matched filter: delay, tone and chirp estimation with bound calculators"};
  app.require_subcommand(1);
  Options opt;

  using Handler = void (*)(const cmf::ExperimentConfig&, Outputs&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"template", "spectral metrics and lobe constants of a template", cmd_template},
      {"simulate", "single measurement sets, traces and the noiseless peaking demo", cmd_simulate},
      {"sweep", "success rate versus noise level", cmd_sweep},
      {"bounds", "bound report (and bound_check experiment)", cmd_bounds},
      {"tone", "tone frequency recovery trials", cmd_tone},
      {"chirp", "chirp time-of-arrival trials", cmd_chirp},
      {"baseline", "Nyquist-rate matched filter comparison", cmd_baseline},
  };
  Handler chosen = nullptr;
  for (const auto& [name, help, handler] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "experiment configuration (JSON)")->required();
    sub->add_option("--seed", opt.seed, "master seed override");
    sub->add_option("--trials", opt.trials, "trial count override");
    sub->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->callback([&chosen, h = handler] { chosen = h; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto cfg = load_config(opt);
    Outputs out{fs::path(opt.out_dir)};
    chosen(cfg, out);
    out.manifest(cfg);
  } catch (const cmf::DegenerateMeasurement& e) {
    std::cerr << "cmf: degenerate measurement: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const cmf::ConfigError& e) {
    std::cerr << "cmf: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cmf::InvalidParameter& e) {
    std::cerr << "cmf: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cmf::PreconditionError& e) {
    std::cerr << "cmf: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cmf::ZeroEnergy& e) {
    std::cerr << "cmf: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cmf::json::exception& e) {
    std::cerr << "cmf: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "cmf: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
