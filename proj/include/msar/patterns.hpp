#pragma once
// msar/patterns.hpp - heuristic search patterns and footprint coverage
//
// Every pattern is first laid out as a polyline of waypoints. Corners are
// then replaced by constant-rate arcs at omega_max (radius r = speed /
// omega_max), shortening the adjoining legs by the arc's tangent length, and
// the resulting straight/arc control sequence is integrated with the unicycle
// model. A corner is infeasible when its tangent lengths do not fit on the
// legs around it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "msar/drift_model.hpp"
#include "msar/geometry.hpp"
#include "msar/mission_model.hpp"
#include "msar/sensor_model.hpp"

namespace msar::mission {

using drift::SearchArea;

struct PatternOptions {
  VehicleLimits limits{30.0, 0.5};
  double dt{0.05};                     ///< integrator step [s]
  double t0{0.0};                      ///< trajectory start time [s]
  std::optional<double> hold_until;    ///< loiter after the pattern until this time
};

namespace detail {

inline double heading_of(Vec2 d) { return std::atan2(d.y, d.x); }

inline void check_pattern_inputs(double speed, const PatternOptions& opt) {
  if (!(speed > 0.0)) throw std::invalid_argument("pattern: speed must be > 0");
  if (!(speed <= opt.limits.u_max)) throw std::invalid_argument("pattern: speed exceeds u_max");
  if (!(opt.limits.omega_max > 0.0 && std::isfinite(opt.limits.omega_max)))
    throw std::invalid_argument("pattern: omega_max must be finite and > 0");
}

}  // namespace detail

/// Converts a waypoint polyline into filleted straight/arc control segments.
inline std::vector<ControlSegment> fillet_controls(const std::vector<Vec2>& wp, double speed,
                                                   const PatternOptions& opt) {
  detail::check_pattern_inputs(speed, opt);
  if (wp.size() < 2) throw std::invalid_argument("pattern: needs at least two waypoints");
  const double omega = opt.limits.omega_max;
  const double radius = speed / omega;
  const std::size_t n_legs = wp.size() - 1;

  std::vector<double> leg_len(n_legs), leg_heading(n_legs);
  for (std::size_t i = 0; i < n_legs; ++i) {
    leg_len[i] = norm(wp[i + 1] - wp[i]);
    if (leg_len[i] == 0.0) throw std::invalid_argument("pattern: repeated waypoint");
    leg_heading[i] = detail::heading_of(wp[i + 1] - wp[i]);
  }
  // turn[i] is the heading change at waypoint i + 1, between leg i and leg i + 1.
  std::vector<double> turn(n_legs, 0.0), tangent(n_legs + 1, 0.0);
  for (std::size_t i = 0; i + 1 < n_legs; ++i) {
    turn[i] = wrap_angle(leg_heading[i + 1] - leg_heading[i]);
    if (std::abs(turn[i]) >= std::numbers::pi - 1e-9)
      throw std::invalid_argument("pattern: reversal corner cannot be filleted");
    tangent[i + 1] = radius * std::tan(std::abs(turn[i]) / 2.0);
  }

  std::vector<ControlSegment> out;
  double t = opt.t0;
  auto push = [&](double duration, ControlInput in) {
    if (duration <= 0.0) return;
    out.push_back({t, t + duration, in});
    t += duration;
  };
  for (std::size_t i = 0; i < n_legs; ++i) {
    const double straight = leg_len[i] - tangent[i] - tangent[i + 1];
    if (straight < -1e-9 * leg_len[i])
      throw std::invalid_argument("pattern: legs too short for the turn radius at this speed");
    push(std::max(0.0, straight) / speed, {speed, 0.0});
    if (i + 1 < n_legs && turn[i] != 0.0)
      push(std::abs(turn[i]) / omega, {speed, std::copysign(omega, turn[i])});
  }
  if (opt.hold_until && *opt.hold_until > t) {
    push(*opt.hold_until - t, {speed, omega});  // loiter orbit
  }
  return out;
}

inline Trajectory pattern_trajectory(const std::vector<Vec2>& waypoints, double speed,
                                     double altitude, const PatternOptions& opt) {
  const auto controls = fillet_controls(waypoints, speed, opt);
  const Configuration q0{waypoints[0].x, waypoints[0].y,
                         detail::heading_of(waypoints[1] - waypoints[0])};
  return integrate_trajectory(q0, controls, opt.dt, altitude, opt.limits, speed);
}

// -----------------------------------------------------------------------
// Lawnmower (parallel sweep)
// -----------------------------------------------------------------------

/// Track y-positions for a parallel sweep of `area` along x. Tracks sit half a
/// spacing inside the edges, with the actual spacing <= track_spacing; an area
/// no taller than one spacing gets a single centered track.
inline std::vector<double> lawnmower_tracks(const SearchArea& area, double track_spacing) {
  area.validate();
  if (!(track_spacing > 0.0)) throw std::invalid_argument("lawnmower: track_spacing must be > 0");
  const double h = area.height();
  if (h <= track_spacing) return {area.center().y};
  const auto n = static_cast<std::size_t>(std::ceil(h / track_spacing * (1.0 - 1e-12)));
  const double first = area.min.y + track_spacing / 2.0;
  const double step = (h - track_spacing) / static_cast<double>(n - 1);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = first + step * static_cast<double>(i);
  return ys;
}

inline std::vector<Vec2> lawnmower_waypoints(const SearchArea& area, double track_spacing) {
  std::vector<Vec2> wp;
  const auto ys = lawnmower_tracks(area, track_spacing);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const bool forward = (i % 2 == 0);
    wp.push_back({forward ? area.min.x : area.max.x, ys[i]});
    wp.push_back({forward ? area.max.x : area.min.x, ys[i]});
  }
  return wp;
}

inline Trajectory generate_lawnmower(const SearchArea& area, double track_spacing, double speed,
                                     double altitude, const PatternOptions& opt = {}) {
  return pattern_trajectory(lawnmower_waypoints(area, track_spacing), speed, altitude, opt);
}

// -----------------------------------------------------------------------
// Expanding square
// -----------------------------------------------------------------------

/// Square spiral from the datum; legs turn left and the k-th pair of legs has
/// length k * leg_increment.
inline std::vector<Vec2> expanding_square_waypoints(Vec2 center, double leg_increment,
                                                    std::size_t n_legs, double heading0 = 0.0) {
  if (!(leg_increment > 0.0))
    throw std::invalid_argument("expanding_square: leg_increment must be > 0");
  if (n_legs < 1) throw std::invalid_argument("expanding_square: needs at least one leg");
  std::vector<Vec2> wp{center};
  for (std::size_t k = 0; k < n_legs; ++k) {
    const double len = static_cast<double>(k / 2 + 1) * leg_increment;
    const double heading = heading0 + static_cast<double>(k % 4) * std::numbers::pi / 2.0;
    wp.push_back(wp.back() + len * unit(heading));
  }
  return wp;
}

inline Trajectory generate_expanding_square(Vec2 center, double leg_increment, double speed,
                                            double altitude, std::size_t n_legs = 12,
                                            const PatternOptions& opt = {}) {
  return pattern_trajectory(expanding_square_waypoints(center, leg_increment, n_legs), speed,
                            altitude, opt);
}

// -----------------------------------------------------------------------
// Sector search
// -----------------------------------------------------------------------

inline constexpr double kSectorCycleRotation = std::numbers::pi / 6.0;  // 30 deg

/// Each cycle flies three chords of length 2 * radius through the datum at
/// 120 deg separation, joined by right turns along the rim; every further
/// cycle is rotated by 30 deg.
inline std::vector<Vec2> sector_waypoints(Vec2 center, double radius, std::size_t cycles = 1,
                                          double heading0 = 0.0) {
  if (!(radius > 0.0)) throw std::invalid_argument("sector: radius must be > 0");
  if (cycles < 1) throw std::invalid_argument("sector: needs at least one cycle");
  constexpr double third = 2.0 * std::numbers::pi / 3.0;
  std::vector<Vec2> wp;
  for (std::size_t c = 0; c < cycles; ++c) {
    const double alpha = heading0 + static_cast<double>(c) * kSectorCycleRotation;
    for (int leg = 0; leg < 3; ++leg) {
      const double dir = alpha + leg * third;
      wp.push_back(center - radius * unit(dir));
      wp.push_back(center + radius * unit(dir));
    }
  }
  return wp;
}

inline Trajectory generate_sector_search(Vec2 center, double radius, double speed, double altitude,
                                         std::size_t cycles = 1, const PatternOptions& opt = {}) {
  return pattern_trajectory(sector_waypoints(center, radius, cycles), speed, altitude, opt);
}

// -----------------------------------------------------------------------
// Footprint coverage
// -----------------------------------------------------------------------

/// Fraction of `area` cells (centers on a `cell`-meter raster) that fall
/// inside the camera footprint at one or more trajectory samples. The
/// footprint is centered on the vehicle, along-track extent fs_v, cross-track
/// extent fs_h.
inline double coverage_fraction(const Trajectory& traj, const sensor::Footprint& fp,
                                const SearchArea& area, double cell = 1.0) {
  area.validate();
  if (!(cell > 0.0)) throw std::invalid_argument("coverage: cell must be > 0");
  const auto nx = static_cast<std::size_t>(std::ceil(area.width() / cell));
  const auto ny = static_cast<std::size_t>(std::ceil(area.height() / cell));
  std::vector<std::uint8_t> hit(nx * ny, 0);
  const double ha = fp.fs_v / 2.0, hb = fp.fs_h / 2.0;
  const double reach = std::hypot(ha, hb);

  // Solves lo <= k * x + c <= hi for x, intersecting with [x0, x1].
  auto clip = [](double k, double c, double lim, double& x0, double& x1) {
    if (k == 0.0) {
      if (std::abs(c) > lim) x1 = x0 - 1.0;
      return;
    }
    double a = (-lim - c) / k, b = (lim - c) / k;
    if (a > b) std::swap(a, b);
    x0 = std::max(x0, a);
    x1 = std::min(x1, b);
  };

  for (const auto& s : traj.samples()) {
    const Vec2 p = s.q.position();
    const double cs = std::cos(s.q.psi), sn = std::sin(s.q.psi);
    const double y_lo = std::max(area.min.y, p.y - reach), y_hi = std::min(area.max.y, p.y + reach);
    if (y_lo > y_hi) continue;
    const auto j0 = static_cast<std::ptrdiff_t>(std::max(0.0, std::floor((y_lo - area.min.y) / cell)));
    const auto j1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(ny) - 1,
                                             static_cast<std::ptrdiff_t>((y_hi - area.min.y) / cell));
    for (std::ptrdiff_t j = j0; j <= j1; ++j) {
      const double yc = area.min.y + (static_cast<double>(j) + 0.5) * cell;
      const double dy = yc - p.y;
      double x0 = -1e300, x1 = 1e300;
      clip(cs, sn * dy, ha, x0, x1);   // along-track: cs dx + sn dy
      clip(-sn, cs * dy, hb, x0, x1);  // cross-track: -sn dx + cs dy
      if (x0 > x1) continue;
      const double gx0 = (p.x + x0 - area.min.x) / cell - 0.5;
      const double gx1 = (p.x + x1 - area.min.x) / cell - 0.5;
      const auto i0 = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(gx0)));
      const auto i1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(nx) - 1,
                                               static_cast<std::ptrdiff_t>(std::floor(gx1)));
      for (std::ptrdiff_t i = i0; i <= i1; ++i) hit[static_cast<std::size_t>(j) * nx + i] = 1;
    }
  }
  std::size_t covered = 0;
  for (auto h : hit) covered += h;
  return static_cast<double>(covered) / static_cast<double>(hit.size());
}

}  // namespace msar::mission
