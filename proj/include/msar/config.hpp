#pragma once
// msar/config.hpp - tool configuration file
//
// A JSON document with one block per concern: camera, target, environment,
// uncertainty, search_area (optional), mission, run. Angles are given in
// degrees and converted on load; everything else is SI. Every invariant is
// checked at load time and reported with the offending field path, e.g.
// "mission.speed_mps: expected a number".

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "msar/drift_model.hpp"
#include "msar/energy.hpp"
#include "msar/io.hpp"
#include "msar/mission_model.hpp"
#include "msar/obstacles.hpp"
#include "msar/sensor_model.hpp"

namespace msar::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Pattern { lawnmower, expanding_square, sector };

/// Explicit search rectangle; when absent the area comes from a drift run.
struct ExplicitArea {
  Vec2 center{};
  double width{0.0};
  double height{0.0};
};

struct MissionBlock {
  Pattern pattern{Pattern::lawnmower};
  std::optional<double> track_spacing;   ///< empty: along "auto" = cross-track footprint
  std::optional<double> leg_increment;   ///< expanding square; empty: auto
  std::optional<std::size_t> legs;       ///< expanding square; empty: auto
  std::optional<double> sector_radius;   ///< empty: half the larger area side
  std::size_t sector_cycles{2};
  std::optional<Vec2> pattern_center;    ///< empty: search area center
  double speed{20.0};
  std::optional<double> altitude;        ///< empty: "auto"
  double h_min{10.0};
  double h_max{1000.0};
  double altitude_tolerance{0.1};
  mission::VehicleLimits limits{30.0, 0.5};
  double t0{0.0};
  std::optional<double> tf;
  mission::EnergyModel energy{0.0, std::numeric_limits<double>::infinity()};
  std::optional<double> detection_interval;
  std::optional<double> survival_time;
  double rescue_delay{0.0};
  int n_targets{10};
  mission::ObstacleRegion obstacles;
};

struct RunBlock {
  std::uint64_t master_seed{1};
  std::size_t particles{10000};
  std::size_t m_runs{200};
  double drift_dt{10.0};
  double drift_duration{1200.0};
  double sim_step{1.0};
  double integrator_dt{0.05};
  double dynamics_bound{1.0};
};

struct ToolConfig {
  sensor::CameraSpec camera;
  sensor::TargetModel target;
  sensor::PodAxis pod_axis{sensor::PodAxis::horizontal};
  drift::EnvironmentConditions environment;
  drift::InitialUncertainty uncertainty;
  std::optional<ExplicitArea> search_area;
  double search_area_quantile{1.0};
  MissionBlock mission;
  RunBlock run;
  nlohmann::ordered_json source;  ///< the document as loaded, echoed into outputs
};

namespace detail {

using json = nlohmann::ordered_json;

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline const json& object(const json& parent, const std::string& key, const std::string& path) {
  const std::string p = join(path, key);
  if (!parent.contains(key)) throw ConfigError(p + ": missing required block");
  const json& j = parent.at(key);
  if (!j.is_object()) throw ConfigError(p + ": expected an object");
  return j;
}

inline double number(const json& j, const std::string& p) {
  if (!j.is_number()) throw ConfigError(p + ": expected a number");
  return j.get<double>();
}

inline double req_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key) + ": missing required field");
  return number(obj.at(key), join(path, key));
}

inline std::optional<double> opt_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return number(obj.at(key), join(path, key));
}

/// A number, or the string "auto" (returned as nullopt).
inline std::optional<double> number_or_auto(const json& obj, const std::string& key,
                                            const std::string& path, bool required) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) {
    if (required) throw ConfigError(p + ": missing required field");
    return std::nullopt;
  }
  const json& j = obj.at(key);
  if (j.is_string() && j.get<std::string>() == "auto") return std::nullopt;
  if (!j.is_number()) throw ConfigError(p + ": expected a number or \"auto\"");
  return j.get<double>();
}

inline std::int64_t req_integer(const json& obj, const std::string& key, const std::string& path) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) throw ConfigError(p + ": missing required field");
  const json& j = obj.at(key);
  if (!j.is_number_integer()) throw ConfigError(p + ": expected an integer");
  return j.get<std::int64_t>();
}

inline std::optional<std::int64_t> opt_integer(const json& obj, const std::string& key,
                                               const std::string& path) {
  if (!obj.contains(key)) return std::nullopt;
  return req_integer(obj, key, path);
}

inline Vec2 vec2(const json& j, const std::string& p) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(p + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Vec2 req_vec2(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key) + ": missing required field");
  return vec2(obj.at(key), join(path, key));
}

inline std::string req_string(const json& obj, const std::string& key, const std::string& path) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) throw ConfigError(p + ": missing required field");
  if (!obj.at(key).is_string()) throw ConfigError(p + ": expected a string");
  return obj.at(key).get<std::string>();
}

/// Runs a domain validate() and rethrows its message under `path`.
template <typename Fn>
void checked(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline void require(bool ok, const std::string& path, const std::string& msg) {
  if (!ok) throw ConfigError(path + ": " + msg);
}

inline std::size_t positive_count(const json& obj, const std::string& key, const std::string& path,
                                  std::size_t fallback, std::size_t min_value = 1) {
  auto v = opt_integer(obj, key, path);
  if (!v) return fallback;
  require(*v >= static_cast<std::int64_t>(min_value), join(path, key),
          "must be >= " + std::to_string(min_value));
  return static_cast<std::size_t>(*v);
}

inline sensor::CameraSpec parse_camera(const json& root) {
  const json& c = object(root, "camera", "");
  sensor::CameraSpec cam;
  cam.fov_h = deg_to_rad(req_number(c, "fov_h_deg", "camera"));
  cam.fov_v = deg_to_rad(req_number(c, "fov_v_deg", "camera"));
  cam.px_h = static_cast<int>(req_integer(c, "px_h", "camera"));
  cam.px_v = static_cast<int>(req_integer(c, "px_v", "camera"));
  cam.framerate = req_number(c, "framerate_hz", "camera");
  cam.emissivity_setting = opt_number(c, "emissivity", "camera").value_or(0.98);
  checked("camera", [&] { cam.validate(); });
  return cam;
}

inline void parse_target(const json& root, ToolConfig& cfg) {
  const json& t = object(root, "target", "");
  sensor::TargetModel& m = cfg.target;
  m.width = req_number(t, "width_m", "target");
  m.height = req_number(t, "height_m", "target");
  // Default characteristic dimension: geometric mean of the target sides.
  m.d_c = opt_number(t, "d_c_m", "target").value_or(std::sqrt(std::abs(m.width * m.height)));
  m.n50_detection = opt_number(t, "n50_detection", "target").value_or(0.75);
  m.n50_recognition = opt_number(t, "n50_recognition", "target").value_or(3.0);
  m.n50_identification = opt_number(t, "n50_identification", "target").value_or(6.0);
  checked("target", [&] { m.validate(); });
  if (t.contains("pod_axis")) {
    const std::string a = req_string(t, "pod_axis", "target");
    if (a == "horizontal") cfg.pod_axis = sensor::PodAxis::horizontal;
    else if (a == "geometric_mean") cfg.pod_axis = sensor::PodAxis::geometric_mean;
    else throw ConfigError("target.pod_axis: expected \"horizontal\" or \"geometric_mean\"");
  }
}

inline drift::EnvironmentConditions parse_environment(const json& root) {
  const json& e = object(root, "environment", "");
  drift::EnvironmentConditions env;
  env.current = req_vec2(e, "current_mps", "environment");
  env.wind = req_vec2(e, "wind_mps", "environment");
  env.leeway_fraction = req_number(e, "leeway_fraction", "environment");
  env.diffusion = req_number(e, "diffusion_m2ps", "environment");
  checked("environment", [&] { env.validate(); });
  return env;
}

inline drift::InitialUncertainty parse_uncertainty(const json& root) {
  const json& u = object(root, "uncertainty", "");
  drift::InitialUncertainty out;
  out.center = u.contains("center_m") ? vec2(u.at("center_m"), "uncertainty.center_m") : Vec2{};
  const std::string shape = req_string(u, "shape", "uncertainty");
  const double size = req_number(u, "size_m", "uncertainty");
  if (shape == "square") out.shape = drift::Square{size};
  else if (shape == "disk") out.shape = drift::Disk{size};
  else throw ConfigError("uncertainty.shape: expected \"square\" or \"disk\"");
  checked("uncertainty", [&] { out.validate(); });
  return out;
}

inline mission::ObstacleRegion parse_obstacles(const json& m) {
  mission::ObstacleRegion region;
  if (!m.contains("obstacles")) return region;
  const json& list = m.at("obstacles");
  require(list.is_array(), "mission.obstacles", "expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = "mission.obstacles[" + std::to_string(i) + "]";
    const json& o = list[i];
    require(o.is_object(), p, "expected an object");
    mission::Obstacle obs;
    const std::string type = req_string(o, "type", p);
    if (type == "disc") {
      obs.shape = mission::DiscShape{req_vec2(o, "center_m", p), req_number(o, "radius_m", p)};
    } else if (type == "polygon") {
      require(o.contains("vertices_m") && o.at("vertices_m").is_array(), join(p, "vertices_m"),
              "expected an array of [x, y]");
      std::vector<Vec2> verts;
      for (const auto& v : o.at("vertices_m")) verts.push_back(vec2(v, join(p, "vertices_m")));
      checked(p, [&] { obs.shape = mission::ConvexPolygon(std::move(verts)); });
    } else {
      throw ConfigError(join(p, "type") + ": expected \"disc\" or \"polygon\"");
    }
    if (o.contains("active_s")) {
      const Vec2 w = vec2(o.at("active_s"), join(p, "active_s"));
      obs.active = mission::TimeWindow{w.x, w.y};
    }
    region.obstacles.push_back(std::move(obs));
    checked(p, [&] { region.validate(); });
  }
  return region;
}

inline MissionBlock parse_mission(const json& root) {
  const json& m = object(root, "mission", "");
  const std::string p = "mission";
  MissionBlock b;
  const std::string pattern = req_string(m, "pattern", p);
  if (pattern == "lawnmower") b.pattern = Pattern::lawnmower;
  else if (pattern == "expanding_square") b.pattern = Pattern::expanding_square;
  else if (pattern == "sector") b.pattern = Pattern::sector;
  else throw ConfigError("mission.pattern: expected \"lawnmower\", \"expanding_square\" or \"sector\"");

  b.track_spacing = number_or_auto(m, "track_spacing_m", p, false);
  b.leg_increment = number_or_auto(m, "leg_increment_m", p, false);
  if (auto legs = opt_integer(m, "legs", p)) {
    require(*legs >= 1, "mission.legs", "must be >= 1");
    b.legs = static_cast<std::size_t>(*legs);
  }
  b.sector_radius = number_or_auto(m, "radius_m", p, false);
  b.sector_cycles = positive_count(m, "cycles", p, b.sector_cycles);
  if (m.contains("center_m")) b.pattern_center = vec2(m.at("center_m"), "mission.center_m");

  b.speed = req_number(m, "speed_mps", p);
  b.altitude = number_or_auto(m, "altitude_m", p, true);
  if (m.contains("altitude_range_m")) {
    const Vec2 r = vec2(m.at("altitude_range_m"), "mission.altitude_range_m");
    b.h_min = r.x;
    b.h_max = r.y;
  }
  require(b.h_min > 0.0 && b.h_min < b.h_max, "mission.altitude_range_m", "requires 0 < h_min < h_max");
  b.altitude_tolerance = opt_number(m, "altitude_tolerance_m", p).value_or(b.altitude_tolerance);
  require(b.altitude_tolerance > 0.0, "mission.altitude_tolerance_m", "must be > 0");

  b.limits.u_max = opt_number(m, "u_max_mps", p).value_or(b.limits.u_max);
  b.limits.omega_max = opt_number(m, "omega_max_radps", p).value_or(b.limits.omega_max);
  require(b.limits.u_max > 0.0, "mission.u_max_mps", "must be > 0");
  require(b.limits.omega_max > 0.0, "mission.omega_max_radps", "must be > 0");
  require(b.speed > 0.0 && b.speed <= b.limits.u_max, "mission.speed_mps", "must lie in (0, u_max]");
  if (b.altitude) require(*b.altitude > 0.0, "mission.altitude_m", "must be > 0");
  if (b.track_spacing) require(*b.track_spacing > 0.0, "mission.track_spacing_m", "must be > 0");
  if (b.leg_increment) require(*b.leg_increment > 0.0, "mission.leg_increment_m", "must be > 0");
  if (b.sector_radius) require(*b.sector_radius > 0.0, "mission.radius_m", "must be > 0");

  b.t0 = opt_number(m, "t0_s", p).value_or(0.0);
  require(b.t0 >= 0.0, "mission.t0_s", "must be >= 0");
  b.tf = opt_number(m, "tf_s", p);
  if (b.tf) require(*b.tf > b.t0, "mission.tf_s", "must be > t0_s");

  b.energy.power = req_number(m, "power_w", p);
  b.energy.e_total = req_number(m, "e_total_j", p);
  checked(p, [&] { b.energy.validate(); });

  b.detection_interval = opt_number(m, "detection_interval_s", p);
  if (b.detection_interval) require(*b.detection_interval > 0.0, "mission.detection_interval_s", "must be > 0");
  b.survival_time = opt_number(m, "survival_time_s", p);
  if (b.survival_time) require(*b.survival_time > 0.0, "mission.survival_time_s", "must be > 0");
  b.rescue_delay = opt_number(m, "rescue_delay_s", p).value_or(0.0);
  require(b.rescue_delay >= 0.0, "mission.rescue_delay_s", "must be >= 0");
  const auto n = req_integer(m, "n_targets", p);
  require(n >= 1, "mission.n_targets", "must be >= 1");
  b.n_targets = static_cast<int>(n);
  b.obstacles = parse_obstacles(m);
  return b;
}

inline RunBlock parse_run(const json& root) {
  RunBlock r;
  if (!root.contains("run")) return r;
  const json& j = object(root, "run", "");
  const std::string p = "run";
  if (auto s = opt_integer(j, "master_seed", p)) {
    require(*s >= 0, "run.master_seed", "must be >= 0");
    r.master_seed = static_cast<std::uint64_t>(*s);
  }
  r.particles = positive_count(j, "particles", p, r.particles);
  r.m_runs = positive_count(j, "m_runs", p, r.m_runs, 2);
  r.drift_dt = opt_number(j, "drift_dt_s", p).value_or(r.drift_dt);
  r.drift_duration = opt_number(j, "drift_duration_s", p).value_or(r.drift_duration);
  r.sim_step = opt_number(j, "sim_step_s", p).value_or(r.sim_step);
  r.integrator_dt = opt_number(j, "integrator_dt_s", p).value_or(r.integrator_dt);
  r.dynamics_bound = opt_number(j, "dynamics_bound", p).value_or(r.dynamics_bound);
  require(r.drift_dt > 0.0, "run.drift_dt_s", "must be > 0");
  require(r.drift_duration >= r.drift_dt, "run.drift_duration_s", "must be >= drift_dt_s");
  require(r.sim_step > 0.0, "run.sim_step_s", "must be > 0");
  require(r.integrator_dt > 0.0, "run.integrator_dt_s", "must be > 0");
  require(r.dynamics_bound > 0.0, "run.dynamics_bound", "must be > 0");
  return r;
}

}  // namespace detail

inline ToolConfig parse_config(const nlohmann::ordered_json& root) {
  using namespace detail;
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  ToolConfig cfg;
  cfg.source = root;
  cfg.camera = parse_camera(root);
  parse_target(root, cfg);
  cfg.environment = parse_environment(root);
  cfg.uncertainty = parse_uncertainty(root);
  if (root.contains("search_area")) {
    const json& a = object(root, "search_area", "");
    if (a.contains("width_m") || a.contains("height_m")) {
      ExplicitArea e;
      e.center = a.contains("center_m") ? vec2(a.at("center_m"), "search_area.center_m") : Vec2{};
      e.width = req_number(a, "width_m", "search_area");
      e.height = req_number(a, "height_m", "search_area");
      require(e.width > 0.0 && e.height > 0.0, "search_area", "width_m and height_m must be > 0");
      cfg.search_area = e;
    }
    cfg.search_area_quantile = opt_number(a, "quantile", "search_area").value_or(1.0);
    require(cfg.search_area_quantile > 0.0 && cfg.search_area_quantile <= 1.0, "search_area.quantile",
            "must lie in (0, 1]");
  }
  cfg.mission = parse_mission(root);
  cfg.run = parse_run(root);
  return cfg;
}

inline ToolConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_text_file(path);
  } catch (const io::IoError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  nlohmann::ordered_json root;
  try {
    root = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return parse_config(root);
}

}  // namespace msar::config
