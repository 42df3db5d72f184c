#pragma once
// msar/commands.hpp - the msar command-line operations as library calls
//
// Each command takes a loaded ToolConfig, runs the library modules and writes
// its artifacts. The CLI in tools/ only parses flags and maps exceptions to
// exit codes.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msar/config.hpp"
#include "msar/drift_model.hpp"
#include "msar/io.hpp"
#include "msar/monte_carlo_eval.hpp"
#include "msar/patterns.hpp"
#include "msar/search_metrics.hpp"
#include "msar/sensor_model.hpp"

namespace msar::cli {

using config::ToolConfig;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kConfigError = 1, kInfeasible = 2, kIoError = 3 };

inline constexpr std::uint64_t kSearchAreaStream = 0x4001;

inline fs::path with_suffix(const fs::path& prefix, const std::string& suffix) {
  return fs::path(prefix.string() + suffix);
}

/// Drift ensemble used both by `drift` and to size the search area.
inline drift::ParticleEnsemble initial_ensemble(const ToolConfig& cfg) {
  return drift::init_ensemble(cfg.uncertainty, cfg.run.particles,
                              derive_seed(cfg.run.master_seed, {kSearchAreaStream}));
}

inline drift::SearchArea search_area(const ToolConfig& cfg) {
  if (cfg.search_area) {
    return drift::SearchArea::centered(cfg.search_area->center, cfg.search_area->width,
                                       cfg.search_area->height);
  }
  const auto final_state = drift::simulate(initial_ensemble(cfg), cfg.environment,
                                           cfg.run.drift_duration, cfg.run.drift_dt);
  return drift::bounding_area(final_state, cfg.search_area_quantile);
}

// -----------------------------------------------------------------------
// pod-curve
// -----------------------------------------------------------------------

inline std::vector<io::PodRow> cmd_pod_curve(const ToolConfig& cfg, double h_min, double h_max,
                                             std::size_t samples, const fs::path& out) {
  auto rows = io::pod_rows(cfg.camera, cfg.target, h_min, h_max, samples, cfg.pod_axis);
  io::write_text_file(out, io::pod_curve_csv(rows));
  return rows;
}

// -----------------------------------------------------------------------
// drift
// -----------------------------------------------------------------------

struct DriftOutcome {
  drift::SearchArea initial_area;
  drift::SearchArea final_area;
  std::size_t snapshots{0};
  fs::path snapshot_csv;
  fs::path area_csv;
};

/// Writes `<prefix>_snapshots.csv` (every `snapshot_interval` seconds and the
/// final state) and `<prefix>_area.csv` (every drift step).
inline DriftOutcome cmd_drift(const ToolConfig& cfg, double duration, const fs::path& out_prefix,
                              double snapshot_interval = 120.0) {
  if (!(snapshot_interval > 0.0)) throw std::invalid_argument("drift: snapshot interval must be > 0");
  DriftOutcome r;
  r.snapshot_csv = with_suffix(out_prefix, "_snapshots.csv");
  r.area_csv = with_suffix(out_prefix, "_area.csv");
  std::string snaps = io::kSnapshotHeader, areas = io::kAreaHeader;
  double next_snapshot = 0.0;
  std::optional<drift::SearchArea> first;
  drift::ParticleEnsemble last;
  const auto start = initial_ensemble(cfg);
  const double t_end = start.time + duration;
  drift::simulate(start, cfg.environment, duration, std::min(cfg.run.drift_dt, duration),
                  [&](const drift::ParticleEnsemble& e) {
                    const auto area = drift::bounding_area(e, cfg.search_area_quantile);
                    if (!first) first = area;
                    io::append_area(areas, e.time, area);
                    const bool is_last = e.time >= t_end - 1e-9 * std::max(1.0, t_end);
                    if (e.time >= next_snapshot - 1e-9 || is_last) {
                      io::append_snapshot(snaps, e);
                      ++r.snapshots;
                      while (next_snapshot <= e.time + 1e-9) next_snapshot += snapshot_interval;
                    }
                    last = e;
                  });
  r.initial_area = *first;
  r.final_area = drift::bounding_area(last, cfg.search_area_quantile);
  io::write_text_file(r.snapshot_csv, snaps);
  io::write_text_file(r.area_csv, areas);
  return r;
}

// -----------------------------------------------------------------------
// optimal-altitude
// -----------------------------------------------------------------------

inline nlohmann::ordered_json area_json(const drift::SearchArea& a) {
  return {{"min_m", {a.min.x, a.min.y}}, {"max_m", {a.max.x, a.max.y}},
          {"width_m", a.width()}, {"height_m", a.height()}};
}

struct AltitudeOutcome {
  metrics::OptimalAltitude optimum;
  metrics::PosCurve curve;
  drift::SearchArea area;
};

/// Writes `<prefix>.json` ({h_star, pos_star, ...}) and `<prefix>_curve.csv`.
inline AltitudeOutcome cmd_optimal_altitude(const ToolConfig& cfg, double h_min, double h_max,
                                            const fs::path& out_prefix, std::size_t curve_samples = 256) {
  if (!(h_min > 0.0 && h_min < h_max))
    throw std::invalid_argument("optimal-altitude: requires 0 < h_min < h_max");
  AltitudeOutcome r;
  r.area = search_area(cfg);
  const metrics::PodOptions opt{sensor::Task::detection, cfg.pod_axis};
  r.optimum = metrics::optimal_altitude(cfg.camera, cfg.target, r.area, h_min, h_max,
                                        cfg.mission.altitude_tolerance, opt);
  r.curve = metrics::pos_curve(cfg.camera, cfg.target, r.area, h_min, h_max, curve_samples, opt);
  const sensor::ViewGeometry view{r.optimum.h_star, 0.0};
  const auto fp = sensor::footprint(cfg.camera, view);
  nlohmann::ordered_json j{
      {"h_star_m", r.optimum.h_star},
      {"pos_star", r.optimum.pos_star},
      {"tie", r.optimum.tie},
      {"h_min_m", h_min},
      {"h_max_m", h_max},
      {"tolerance_m", cfg.mission.altitude_tolerance},
      {"footprint_m", {fp.fs_h, fp.fs_v}},
      {"pixels_on_target", sensor::pixels_on_target(cfg.target, sensor::gsd(cfg.camera, view, sensor::Axis::horizontal))},
      {"max_coverage_speed_mps", sensor::max_coverage_speed(cfg.camera, view)},
      {"search_area", area_json(r.area)},
  };
  io::write_text_file(with_suffix(out_prefix, ".json"), j.dump(2) + "\n");
  io::write_text_file(with_suffix(out_prefix, "_curve.csv"), io::pos_curve_csv(r.curve));
  return r;
}

// -----------------------------------------------------------------------
// evaluate
// -----------------------------------------------------------------------

struct ResolvedMission {
  drift::SearchArea area;
  double altitude{0.0};
  bool altitude_auto{false};
  std::optional<double> track_spacing;
  mission::Trajectory trajectory;
  double t0{0.0};
  double tf{0.0};
};

inline mission::Trajectory build_trajectory(const ToolConfig& cfg, const drift::SearchArea& area,
                                            double altitude) {
  const auto& m = cfg.mission;
  mission::PatternOptions opt;
  opt.limits = m.limits;
  opt.dt = cfg.run.integrator_dt;
  opt.t0 = m.t0;
  opt.hold_until = m.tf;
  const auto fp = sensor::footprint(cfg.camera, {altitude, 0.0});
  const Vec2 center = m.pattern_center.value_or(area.center());
  switch (m.pattern) {
    case config::Pattern::lawnmower:
      return mission::generate_lawnmower(area, m.track_spacing.value_or(fp.fs_h), m.speed, altitude, opt);
    case config::Pattern::expanding_square: {
      const double inc = m.leg_increment.value_or(fp.fs_h);
      const double span = std::max(area.width(), area.height());
      const std::size_t legs = m.legs.value_or(2 * static_cast<std::size_t>(std::ceil(span / inc)) + 1);
      return mission::pattern_trajectory(mission::expanding_square_waypoints(center, inc, legs), m.speed,
                                         altitude, opt);
    }
    case config::Pattern::sector: {
      const double radius = m.sector_radius.value_or(std::max(area.width(), area.height()) / 2.0);
      return mission::pattern_trajectory(mission::sector_waypoints(center, radius, m.sector_cycles),
                                         m.speed, altitude, opt);
    }
  }
  throw std::invalid_argument("unknown pattern");
}

/// Resolves search area, altitude ("auto" runs the POS optimizer), the
/// trajectory (generated, or imported when given), and the horizon
/// tf = min(configured tf or trajectory end, energy depletion time).
inline ResolvedMission resolve_mission(const ToolConfig& cfg,
                                       const std::optional<mission::Trajectory>& imported = std::nullopt) {
  ResolvedMission r;
  r.area = search_area(cfg);
  r.t0 = cfg.mission.t0;
  if (imported) {
    r.trajectory = *imported;
    r.altitude = imported->altitude();
  } else {
    if (cfg.mission.altitude) {
      r.altitude = *cfg.mission.altitude;
    } else {
      r.altitude_auto = true;
      r.altitude = metrics::optimal_altitude(cfg.camera, cfg.target, r.area, cfg.mission.h_min,
                                             cfg.mission.h_max, cfg.mission.altitude_tolerance,
                                             {sensor::Task::detection, cfg.pod_axis})
                       .h_star;
    }
    if (cfg.mission.pattern == config::Pattern::lawnmower) {
      r.track_spacing = cfg.mission.track_spacing.value_or(
          sensor::footprint(cfg.camera, {r.altitude, 0.0}).fs_h);
    }
    r.trajectory = build_trajectory(cfg, r.area, r.altitude);
  }
  double tf = cfg.mission.tf.value_or(r.trajectory.end_time());
  tf = std::min(tf, mission::depletion_time(cfg.mission.energy, r.t0));
  r.tf = tf;
  return r;
}

inline mc::MissionScenario build_scenario(const ToolConfig& cfg, const ResolvedMission& r) {
  mc::MissionScenario s;
  s.n_targets = cfg.mission.n_targets;
  s.uncertainty = cfg.uncertainty;
  s.environment = cfg.environment;
  s.camera = cfg.camera;
  s.target = cfg.target;
  s.pod_axis = cfg.pod_axis;
  s.trajectory = r.trajectory;
  s.detection_interval = cfg.mission.detection_interval;
  s.survival_time = cfg.mission.survival_time;
  s.rescue = mc::RescueModel::after(cfg.mission.rescue_delay);
  s.t0 = r.t0;
  s.tf = r.tf;
  s.master_seed = cfg.run.master_seed;
  s.sim_step = cfg.run.sim_step;
  s.drift_dt = cfg.run.drift_dt;
  s.obstacles = cfg.mission.obstacles;
  s.energy = cfg.mission.energy;
  s.limits = cfg.mission.limits;
  s.dynamics_bound = cfg.run.dynamics_bound;
  return s;
}

struct EvaluateOutcome {
  mc::EvalResult result;
  ResolvedMission mission;
  fs::path json_path;
  fs::path series_path;
  fs::path trajectory_path;
};

/// Writes `<prefix>.json`, `<prefix>_series.csv` and `<prefix>_trajectory.csv`
/// (with its `.meta.json` sidecar).
inline EvaluateOutcome cmd_evaluate(const ToolConfig& cfg, const fs::path& out_prefix,
                                    const std::optional<fs::path>& trajectory_in = std::nullopt) {
  std::optional<mission::Trajectory> imported;
  if (trajectory_in) imported = io::read_trajectory(*trajectory_in);
  EvaluateOutcome o;
  o.mission = resolve_mission(cfg, imported);
  const auto scenario = build_scenario(cfg, o.mission);
  o.result = mc::evaluate_mission(scenario, cfg.run.m_runs);

  nlohmann::ordered_json resolved{
      {"altitude_m", o.mission.altitude},
      {"altitude_auto", o.mission.altitude_auto},
      {"search_area", area_json(o.mission.area)},
      {"t0_s", o.mission.t0},
      {"tf_s", o.mission.tf},
      {"n_targets", cfg.mission.n_targets},
      {"master_seed", cfg.run.master_seed},
      {"m_runs", cfg.run.m_runs},
      {"trajectory_samples", o.mission.trajectory.size()},
  };
  if (o.mission.track_spacing) resolved["track_spacing_m"] = *o.mission.track_spacing;
  const nlohmann::ordered_json echo{{"config", cfg.source}, {"resolved", resolved}};

  o.json_path = with_suffix(out_prefix, ".json");
  o.series_path = with_suffix(out_prefix, "_series.csv");
  o.trajectory_path = with_suffix(out_prefix, "_trajectory.csv");
  io::write_text_file(o.json_path, io::eval_json(o.result, echo).dump(2) + "\n");
  io::write_text_file(o.series_path, io::series_csv(o.result.series));
  io::write_trajectory(o.trajectory_path, o.mission.trajectory);
  return o;
}

// -----------------------------------------------------------------------
// compare
// -----------------------------------------------------------------------

struct CompareRow {
  std::string config;
  double j{0.0};
  double j_stderr{0.0};
  double altitude{0.0};
  bool feasible{true};
};

/// Evaluates each candidate and writes a ranking table sorted by ascending J
/// (ties keep input order).
inline std::vector<CompareRow> cmd_compare(const std::vector<std::pair<std::string, ToolConfig>>& configs,
                                           const fs::path& out) {
  if (configs.empty()) throw std::invalid_argument("compare: needs at least one config");
  std::vector<CompareRow> rows;
  for (const auto& [name, cfg] : configs) {
    const auto resolved = resolve_mission(cfg);
    const auto result = mc::evaluate_mission(build_scenario(cfg, resolved), cfg.run.m_runs);
    rows.push_back({name, result.j, result.j_stderr, resolved.altitude, result.feasible()});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) { return a.j < b.j; });
  std::string csv = "rank,config,j_s,j_stderr_s,altitude_m,feasible\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv += fmt::format("{},{},{},{},{},{}\n", i + 1, rows[i].config, rows[i].j, rows[i].j_stderr,
                       rows[i].altitude, rows[i].feasible ? "true" : "false");
  }
  io::write_text_file(out, csv);
  return rows;
}

}  // namespace msar::cli
