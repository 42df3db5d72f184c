// msar - command-line front end for the search planning toolkit.
//
//   msar pod-curve        --config cfg.json --out pod.csv
//   msar drift            --config cfg.json --out drift
//   msar optimal-altitude --config cfg.json --out altitude
//   msar evaluate         --config cfg.json --out eval [--seed N] [--runs M]
//   msar compare          a.json b.json ... --out ranking.csv
//
// Exit codes: 0 success, 1 config error, 2 mission infeasible, 3 I/O error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "msar/commands.hpp"

namespace {

using msar::cli::ExitCode;
using msar::config::ToolConfig;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
};

void add_common(CLI::App* sub, CommonFlags& f, bool needs_config = true) {
  if (needs_config) sub->add_option("--config", f.config, "Configuration file (JSON)")->required();
  sub->add_option("--out", f.out, "Output path or prefix")->required();
  sub->add_option("--seed", f.seed, "Override run.master_seed");
  sub->add_option("--runs", f.runs, "Override run.m_runs")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
}

ToolConfig load(const std::string& path, const CommonFlags& f) {
  ToolConfig cfg = msar::config::load_config(path);
  if (f.seed) cfg.run.master_seed = *f.seed;
  if (f.runs) cfg.run.m_runs = *f.runs;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maritime search planning: detection vs altitude, drift, optimal altitude, mission evaluation"};
  app.require_subcommand(1);

  CommonFlags pod_f, drift_f, alt_f, eval_f, cmp_f;
  double pod_hmin = 10.0, pod_hmax = 1000.0;
  std::size_t pod_samples = 100;
  auto* pod = app.add_subcommand("pod-curve", "Detection/recognition/identification probability vs altitude");
  add_common(pod, pod_f);
  pod->add_option("--h-min", pod_hmin, "Lowest altitude [m]");
  pod->add_option("--h-max", pod_hmax, "Highest altitude [m]");
  pod->add_option("--samples", pod_samples, "Number of altitude samples");

  std::optional<double> drift_duration;
  double snapshot_interval = 120.0;
  auto* drift = app.add_subcommand("drift", "Particle drift simulation and search-area growth");
  add_common(drift, drift_f);
  drift->add_option("--duration", drift_duration, "Simulated time [s] (default run.drift_duration_s)");
  drift->add_option("--snapshot-interval", snapshot_interval, "Seconds between particle snapshots");

  std::optional<double> alt_hmin, alt_hmax;
  std::size_t alt_samples = 256;
  auto* alt = app.add_subcommand("optimal-altitude", "POS-maximizing search altitude");
  add_common(alt, alt_f);
  alt->add_option("--h-min", alt_hmin, "Lowest altitude [m] (default mission.altitude_range_m)");
  alt->add_option("--h-max", alt_hmax, "Highest altitude [m]");
  alt->add_option("--samples", alt_samples, "Samples in the exported POS curve");

  std::optional<std::string> trajectory_in;
  auto* eval = app.add_subcommand("evaluate", "Monte Carlo evaluation of a candidate search trajectory");
  add_common(eval, eval_f);
  eval->add_option("--trajectory", trajectory_in, "Evaluate an imported trajectory CSV instead of the pattern");

  std::vector<std::string> cmp_configs;
  auto* cmp = app.add_subcommand("compare", "Rank candidate configurations by the objective J");
  add_common(cmp, cmp_f, false);
  cmp->add_option("configs", cmp_configs, "Configuration files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ExitCode::kConfigError;
  }

  try {
    if (*pod) {
      const auto cfg = load(pod_f.config, pod_f);
      const auto rows = msar::cli::cmd_pod_curve(cfg, pod_hmin, pod_hmax, pod_samples, pod_f.out);
      std::cout << "wrote " << rows.size() << " rows to " << pod_f.out << "\n";
    } else if (*drift) {
      const auto cfg = load(drift_f.config, drift_f);
      const auto r = msar::cli::cmd_drift(cfg, drift_duration.value_or(cfg.run.drift_duration), drift_f.out,
                                          snapshot_interval);
      std::cout << "search area " << r.initial_area.width() << " x " << r.initial_area.height() << " m -> "
                << r.final_area.width() << " x " << r.final_area.height() << " m\n";
    } else if (*alt) {
      const auto cfg = load(alt_f.config, alt_f);
      const auto r = msar::cli::cmd_optimal_altitude(cfg, alt_hmin.value_or(cfg.mission.h_min),
                                                     alt_hmax.value_or(cfg.mission.h_max), alt_f.out, alt_samples);
      std::cout << "h* = " << r.optimum.h_star << " m, POS* = " << r.optimum.pos_star
                << (r.optimum.tie ? " (tie: lowest altitude)" : "") << "\n";
    } else if (*eval) {
      const auto cfg = load(eval_f.config, eval_f);
      std::optional<std::filesystem::path> traj;
      if (trajectory_in) traj = *trajectory_in;
      const auto o = msar::cli::cmd_evaluate(cfg, eval_f.out, traj);
      std::cout << "J = " << o.result.j << " s (stderr " << o.result.j_stderr << "), altitude "
                << o.mission.altitude << " m, horizon [" << o.mission.t0 << ", " << o.mission.tf << "] s\n";
      if (!o.result.feasible()) {
        std::cerr << "mission infeasible:"
                  << (o.result.free_space.ok ? "" : " free-space")
                  << (o.result.dynamics.ok ? "" : " dynamics")
                  << (o.result.energy.ok ? "" : " energy") << "\n";
        return ExitCode::kInfeasible;
      }
    } else if (*cmp) {
      std::vector<std::pair<std::string, ToolConfig>> cfgs;
      for (const auto& path : cmp_configs) cfgs.emplace_back(path, load(path, cmp_f));
      const auto rows = msar::cli::cmd_compare(cfgs, cmp_f.out);
      for (std::size_t i = 0; i < rows.size(); ++i)
        std::cout << i + 1 << ". " << rows[i].config << "  J = " << rows[i].j << " s\n";
    }
  } catch (const msar::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ExitCode::kConfigError;
  } catch (const msar::io::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return ExitCode::kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return ExitCode::kConfigError;
  }
  return ExitCode::kOk;
}
