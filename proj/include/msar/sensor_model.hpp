#pragma once
// msar/sensor_model.hpp - thermal camera ground resolution and Johnson detection model
//
// Maps a nadir-pointing camera and a search altitude to ground sample
// distance (GSD), resolvable cycles across a person-in-water, and the task
// probability given by the Johnson target transfer probability function.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "msar/geometry.hpp"

namespace msar::sensor {

enum class Axis { horizontal, vertical };
enum class Task { detection, recognition, identification };

/// Which GSD feeds the cycle count when computing POD.
enum class PodAxis { horizontal, geometric_mean };

inline const char* to_string(Task t) {
  switch (t) {
    case Task::detection: return "detection";
    case Task::recognition: return "recognition";
    case Task::identification: return "identification";
  }
  return "?";
}

// -----------------------------------------------------------------------
// Domain types
// -----------------------------------------------------------------------

struct CameraSpec {
  double fov_h{0.0};               ///< horizontal field of view [rad]
  double fov_v{0.0};               ///< vertical field of view [rad]
  int px_h{0};                     ///< detector width [pixels]
  int px_v{0};                     ///< detector height [pixels]
  double framerate{0.0};           ///< [Hz]
  double emissivity_setting{1.0};  ///< stored with the camera, not used in any computation

  /// Datasheet-style constructor; angles given in degrees.
  static CameraSpec from_degrees(double fov_h_deg, double fov_v_deg, int px_h, int px_v,
                                 double framerate, double emissivity = 0.98) {
    CameraSpec c{deg_to_rad(fov_h_deg), deg_to_rad(fov_v_deg), px_h, px_v, framerate, emissivity};
    c.validate();
    return c;
  }

  void validate() const {
    if (!(fov_h > 0.0 && fov_h < std::numbers::pi))
      throw std::invalid_argument("camera: fov_h must lie in (0, pi)");
    if (!(fov_v > 0.0 && fov_v < std::numbers::pi))
      throw std::invalid_argument("camera: fov_v must lie in (0, pi)");
    if (px_h < 1 || px_v < 1) throw std::invalid_argument("camera: pixel counts must be >= 1");
    if (!(framerate > 0.0)) throw std::invalid_argument("camera: framerate must be > 0");
    if (!(emissivity_setting > 0.0 && emissivity_setting <= 1.0))
      throw std::invalid_argument("camera: emissivity must lie in (0, 1]");
  }
};

struct TargetModel {
  double width{0.5};   ///< [m]
  double height{0.5};  ///< [m]
  double d_c{0.5};     ///< characteristic dimension [m]
  double n50_detection{0.75};
  double n50_recognition{3.0};
  double n50_identification{6.0};

  void validate() const {
    if (!(width > 0.0 && height > 0.0 && d_c > 0.0))
      throw std::invalid_argument("target: width, height and d_c must be > 0");
    if (!(n50_detection > 0.0 && n50_detection < n50_recognition &&
          n50_recognition < n50_identification))
      throw std::invalid_argument(
          "target: n50 values must satisfy 0 < detection < recognition < identification");
  }

  double n50(Task task) const {
    switch (task) {
      case Task::detection: return n50_detection;
      case Task::recognition: return n50_recognition;
      case Task::identification: return n50_identification;
    }
    throw std::invalid_argument("target: unknown task");
  }
};

struct ViewGeometry {
  double altitude{0.0};  ///< above the sea surface [m]
  double tilt{0.0};      ///< from nadir [rad]

  void validate() const {
    if (!(altitude > 0.0)) throw std::invalid_argument("view: altitude must be > 0");
    if (!(tilt >= 0.0 && tilt < std::numbers::pi / 2))
      throw std::invalid_argument("view: tilt must lie in [0, pi/2)");
  }
};

/// Ground footprint; fs_h is cross-track, fs_v is along-track.
struct Footprint {
  double fs_h{0.0};
  double fs_v{0.0};
  double area() const noexcept { return fs_h * fs_v; }
};

// -----------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------

/// Ground sample distance [m/pixel]. Slant range equals altitude at nadir;
/// the vertical axis carries the 1/cos(tilt) stretch.
inline double gsd(const CameraSpec& camera, const ViewGeometry& view, Axis axis) {
  view.validate();
  const double range = view.altitude;
  if (axis == Axis::horizontal) {
    return 2.0 * range * std::tan(camera.fov_h / (2.0 * camera.px_h));
  }
  return 2.0 * range / std::cos(view.tilt) * std::tan(camera.fov_v / (2.0 * camera.px_v));
}

inline double cycles_on_target(double d_c, double gsd_m) {
  if (!(d_c > 0.0) || !(gsd_m > 0.0))
    throw std::invalid_argument("cycles_on_target: d_c and gsd must be > 0");
  return d_c / (2.0 * gsd_m);
}

/// Johnson target transfer probability function, P = x^E / (1 + x^E) with
/// x = n / n50 and E = 2.7 + 0.7 x.
inline double johnson_probability(double n, double n50) {
  if (!(n >= 0.0)) throw std::invalid_argument("johnson_probability: n must be >= 0");
  if (!(n50 > 0.0)) throw std::invalid_argument("johnson_probability: n50 must be > 0");
  if (n == 0.0) return 0.0;
  const double x = n / n50;
  const double e = 2.7 + 0.7 * x;
  // x^E / (1 + x^E) == 1 / (1 + x^-E); stays finite for large x.
  const double inv = std::exp(-e * std::log(x));
  return 1.0 / (1.0 + inv);
}

/// 1 - johnson_probability(n, n50), evaluated without cancellation. It stays
/// resolvable where P itself rounds to 1.
inline double johnson_miss_probability(double n, double n50) {
  if (!(n >= 0.0)) throw std::invalid_argument("johnson_miss_probability: n must be >= 0");
  if (!(n50 > 0.0)) throw std::invalid_argument("johnson_miss_probability: n50 must be > 0");
  if (n == 0.0) return 1.0;
  const double x = n / n50;
  const double inv = std::exp(-(2.7 + 0.7 * x) * std::log(x));
  return inv / (1.0 + inv);
}

namespace detail {
inline double pod_cycles(const CameraSpec& camera, const TargetModel& target,
                         const ViewGeometry& view, PodAxis axis) {
  if (view.tilt != 0.0) throw std::invalid_argument("pod_at_altitude: only nadir views are modelled");
  double g = gsd(camera, view, Axis::horizontal);
  if (axis == PodAxis::geometric_mean) g = std::sqrt(g * gsd(camera, view, Axis::vertical));
  return cycles_on_target(target.d_c, g);
}
}  // namespace detail

inline double pod_at_altitude(const CameraSpec& camera, const TargetModel& target,
                              const ViewGeometry& view, Task task,
                              PodAxis axis = PodAxis::horizontal) {
  return johnson_probability(detail::pod_cycles(camera, target, view, axis), target.n50(task));
}

inline double miss_at_altitude(const CameraSpec& camera, const TargetModel& target,
                               const ViewGeometry& view, Task task,
                               PodAxis axis = PodAxis::horizontal) {
  return johnson_miss_probability(detail::pod_cycles(camera, target, view, axis), target.n50(task));
}

/// Linear pixel extent of the target, compared against the 5 px rule of thumb.
inline double pixels_on_target(const TargetModel& target, double gsd_m) {
  if (!(gsd_m > 0.0)) throw std::invalid_argument("pixels_on_target: gsd must be > 0");
  return target.width / gsd_m;
}

inline constexpr double kMinDetectionPixels = 5.0;

inline Footprint footprint(const CameraSpec& camera, const ViewGeometry& view) {
  return {gsd(camera, view, Axis::horizontal) * camera.px_h,
          gsd(camera, view, Axis::vertical) * camera.px_v};
}

/// Speed at which consecutive frames just tile the along-track footprint.
/// A loose theoretical ceiling: airframe limits bind long before it does.
inline double max_coverage_speed(const CameraSpec& camera, const ViewGeometry& view) {
  return footprint(camera, view).fs_v * camera.framerate;
}

/// Altitude at which the nadir POD equals `p`, searched by bisection on
/// [lo, hi]. POD is strictly decreasing in altitude, so the root is unique.
inline double altitude_for_pod(const CameraSpec& camera, const TargetModel& target, Task task,
                               double p, double lo = 1e-3, double hi = 1e6,
                               PodAxis axis = PodAxis::horizontal) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("altitude_for_pod: p must lie in (0, 1)");
  auto f = [&](double h) { return pod_at_altitude(camera, target, {h, 0.0}, task, axis) - p; };
  if (f(lo) < 0.0 || f(hi) > 0.0)
    throw std::invalid_argument("altitude_for_pod: p not bracketed by [lo, hi]");
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace msar::sensor
