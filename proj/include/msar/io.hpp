#pragma once
// msar/io.hpp - CSV and JSON artifacts
//
// Numbers are written in shortest round-trip form, so files are
// byte-reproducible and re-import exactly.

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msar/drift_model.hpp"
#include "msar/mission_model.hpp"
#include "msar/monte_carlo_eval.hpp"
#include "msar/search_metrics.hpp"
#include "msar/sensor_model.hpp"

namespace msar::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// -----------------------------------------------------------------------
// Sensor / metrics curves
// -----------------------------------------------------------------------

struct PodRow {
  double altitude{0.0};
  double p_detection{0.0};
  double p_recognition{0.0};
  double p_identification{0.0};
};

inline std::vector<PodRow> pod_rows(const sensor::CameraSpec& camera, const sensor::TargetModel& target,
                                    double h_min, double h_max, std::size_t samples,
                                    sensor::PodAxis axis = sensor::PodAxis::horizontal) {
  if (samples < 2) throw std::invalid_argument("pod curve: samples must be >= 2");
  if (!(h_min > 0.0 && h_min < h_max)) throw std::invalid_argument("pod curve: requires 0 < h_min < h_max");
  std::vector<PodRow> rows;
  const double step = (h_max - h_min) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double h = (i + 1 == samples) ? h_max : h_min + step * static_cast<double>(i);
    const sensor::ViewGeometry v{h, 0.0};
    rows.push_back({h, sensor::pod_at_altitude(camera, target, v, sensor::Task::detection, axis),
                    sensor::pod_at_altitude(camera, target, v, sensor::Task::recognition, axis),
                    sensor::pod_at_altitude(camera, target, v, sensor::Task::identification, axis)});
  }
  return rows;
}

inline std::string pod_curve_csv(const std::vector<PodRow>& rows) {
  std::string s = "altitude_m,p_detection,p_recognition,p_identification\n";
  for (const auto& r : rows)
    s += fmt::format("{},{},{},{}\n", r.altitude, r.p_detection, r.p_recognition, r.p_identification);
  return s;
}

inline std::string pos_curve_csv(const metrics::PosCurve& curve) {
  std::string s = "altitude_m,poc,pod,pos\n";
  for (const auto& r : curve.samples) s += fmt::format("{},{},{},{}\n", r.altitude, r.poc, r.pod, r.pos);
  return s;
}

// -----------------------------------------------------------------------
// Drift
// -----------------------------------------------------------------------

inline constexpr const char* kSnapshotHeader = "time_s,particle_id,x_m,y_m\n";
inline constexpr const char* kAreaHeader = "time_s,width_m,height_m\n";

inline void append_snapshot(std::string& out, const drift::ParticleEnsemble& e) {
  for (std::size_t i = 0; i < e.positions.size(); ++i)
    out += fmt::format("{},{},{},{}\n", e.time, i, e.positions[i].x, e.positions[i].y);
}

inline void append_area(std::string& out, double time, const drift::SearchArea& a) {
  out += fmt::format("{},{},{}\n", time, a.width(), a.height());
}

// -----------------------------------------------------------------------
// Trajectory
// -----------------------------------------------------------------------

inline std::filesystem::path trajectory_meta_path(const std::filesystem::path& csv) {
  return std::filesystem::path(csv.string() + ".meta.json");
}

inline std::string trajectory_csv(const mission::Trajectory& traj) {
  std::string s = "time_s,x_m,y_m,psi_rad\n";
  for (const auto& p : traj.samples()) s += fmt::format("{},{},{},{}\n", p.t, p.q.x, p.q.y, p.q.psi);
  return s;
}

inline nlohmann::ordered_json trajectory_meta(const mission::Trajectory& traj) {
  return {{"altitude_m", traj.altitude()}, {"speed_mps", traj.speed()}};
}

inline void write_trajectory(const std::filesystem::path& csv, const mission::Trajectory& traj) {
  write_text_file(csv, trajectory_csv(traj));
  write_text_file(trajectory_meta_path(csv), trajectory_meta(traj).dump(2) + "\n");
}

inline mission::Trajectory parse_trajectory(const std::string& csv, const nlohmann::json& meta) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line.rfind("time_s,x_m,y_m,psi_rad", 0) != 0)
    throw std::invalid_argument("trajectory csv: missing header 'time_s,x_m,y_m,psi_rad'");
  std::vector<mission::TrajectorySample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    double v[4];
    std::istringstream ls(line);
    std::string cell;
    for (int c = 0; c < 4; ++c) {
      if (!std::getline(ls, cell, ','))
        throw std::invalid_argument(fmt::format("trajectory csv line {}: expected 4 columns", line_no));
      try {
        std::size_t used = 0;
        v[c] = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument(fmt::format("trajectory csv line {}: bad number '{}'", line_no, cell));
      }
    }
    samples.push_back({v[0], {v[1], v[2], wrap_angle(v[3])}, {}});
  }
  if (!meta.contains("altitude_m") || !meta.contains("speed_mps"))
    throw std::invalid_argument("trajectory metadata: needs altitude_m and speed_mps");
  return mission::Trajectory(mission::infer_controls(std::move(samples)), meta.at("altitude_m").get<double>(),
                             meta.at("speed_mps").get<double>());
}

inline mission::Trajectory read_trajectory(const std::filesystem::path& csv) {
  const auto meta = nlohmann::json::parse(read_text_file(trajectory_meta_path(csv)));
  return parse_trajectory(read_text_file(csv), meta);
}

// -----------------------------------------------------------------------
// Evaluation
// -----------------------------------------------------------------------

inline std::string series_csv(const mc::SavedSeries& s) {
  std::string out = "time_s,expected_saved,stderr\n";
  for (std::size_t k = 0; k < s.time.size(); ++k)
    out += fmt::format("{},{},{}\n", s.time[k], s.mean[k], s.stderr_[k]);
  return out;
}

inline nlohmann::ordered_json verdicts_json(const mc::EvalResult& r) {
  nlohmann::ordered_json fs{{"ok", r.free_space.ok}};
  if (r.free_space.first_violation) {
    const auto& v = *r.free_space.first_violation;
    fs["first_violation"] = {{"time_s", v.time}, {"x_m", v.position.x}, {"y_m", v.position.y}};
  }
  return {
      {"free_space", fs},
      {"dynamics",
       {{"ok", r.dynamics.ok},
        {"max_residual", r.dynamics.max_residual},
        {"max_residual_over_dt", r.dynamics.max_residual_over_dt},
        {"max_speed_mps", r.dynamics.max_speed},
        {"max_yaw_rate_radps", r.dynamics.max_yaw_rate}}},
      {"energy", {{"ok", r.energy.ok}, {"used_j", r.energy.used}, {"budget_j", r.energy.budget}}},
  };
}

inline nlohmann::ordered_json eval_json(const mc::EvalResult& r, const nlohmann::ordered_json& scenario_echo) {
  return {
      {"scenario", scenario_echo},
      {"j_s", r.j},
      {"j_stderr_s", r.j_stderr},
      {"m_runs", r.m_runs},
      {"pod", r.pod},
      {"detection_interval_s", r.detection_interval},
      {"detected_fraction", r.detected_fraction},
      {"expected_saved_tf", r.series.mean.empty() ? 0.0 : r.series.mean.back()},
      {"feasible", r.feasible()},
      {"constraints", verdicts_json(r)},
  };
}

}  // namespace msar::io
