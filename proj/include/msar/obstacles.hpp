#pragma once
// msar/obstacles.hpp - static planar obstacles and the free-space check
//
// Obstacles are closed sets: a trajectory that merely touches a boundary
// collides.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "msar/geometry.hpp"
#include "msar/mission_model.hpp"

namespace msar::mission {

struct DiscShape {
  Vec2 center{};
  double radius{0.0};
};

class ConvexPolygon {
 public:
  ConvexPolygon() = default;
  explicit ConvexPolygon(std::vector<Vec2> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 3) throw std::invalid_argument("polygon: needs at least 3 vertices");
    double area2 = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) area2 += cross(v_[i], v_[(i + 1) % v_.size()]);
    if (area2 == 0.0) throw std::invalid_argument("polygon: vertices are collinear");
    if (area2 < 0.0) std::reverse(v_.begin(), v_.end());
    for (std::size_t i = 0; i < v_.size(); ++i) {
      const Vec2 e0 = v_[(i + 1) % v_.size()] - v_[i];
      const Vec2 e1 = v_[(i + 2) % v_.size()] - v_[(i + 1) % v_.size()];
      if (cross(e0, e1) < 0.0) throw std::invalid_argument("polygon: not convex");
    }
  }
  const std::vector<Vec2>& vertices() const noexcept { return v_; }

 private:
  std::vector<Vec2> v_;  // counter-clockwise
};

struct TimeWindow {
  double begin{-std::numeric_limits<double>::infinity()};
  double end{std::numeric_limits<double>::infinity()};
};

struct Obstacle {
  std::variant<DiscShape, ConvexPolygon> shape;
  std::optional<TimeWindow> active;  ///< always active when empty

  bool active_during(double t0, double t1) const noexcept {
    return !active || (active->begin <= t1 && t0 <= active->end);
  }
};

struct ObstacleRegion {
  std::vector<Obstacle> obstacles;

  void validate() const {
    for (const auto& o : obstacles) {
      if (const auto* d = std::get_if<DiscShape>(&o.shape); d && !(d->radius > 0.0))
        throw std::invalid_argument("obstacle: disc radius must be > 0");
      if (o.active && !(o.active->begin <= o.active->end))
        throw std::invalid_argument("obstacle: active window begins after it ends");
    }
  }
};

/// Parameter interval [s_in, s_out] within [0, 1] on which a + s (b - a)
/// lies inside the closed shape; empty when the segment misses it.
struct ContactInterval {
  double s_in{0.0};
  double s_out{0.0};
};

inline std::optional<ContactInterval> contact_interval(Vec2 a, Vec2 b, const DiscShape& disc) {
  const Vec2 d = b - a, f = a - disc.center;
  const double r2 = disc.radius * disc.radius;
  const double aa = norm_sq(d);
  if (aa == 0.0) {
    if (norm_sq(f) <= r2) return ContactInterval{0.0, 1.0};
    return std::nullopt;
  }
  const double t_closest = std::clamp(-dot(f, d) / aa, 0.0, 1.0);
  if (norm_sq(f + t_closest * d) > r2) return std::nullopt;
  const double bb = 2.0 * dot(f, d), cc = norm_sq(f) - r2;
  const double disc_val = bb * bb - 4.0 * aa * cc;
  if (disc_val <= 0.0) return ContactInterval{t_closest, t_closest};  // grazing contact
  const double root = std::sqrt(disc_val);
  // Clamping to t_closest keeps rounding from pushing the interval off the
  // point already known to be inside.
  return ContactInterval{std::clamp((-bb - root) / (2.0 * aa), 0.0, t_closest),
                         std::clamp((-bb + root) / (2.0 * aa), t_closest, 1.0)};
}

inline std::optional<ContactInterval> contact_interval(Vec2 a, Vec2 b, const ConvexPolygon& poly) {
  // Cyrus-Beck clipping against closed half-planes.
  const auto& v = poly.vertices();
  const Vec2 d = b - a;
  double s_enter = 0.0, s_exit = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 e = v[(i + 1) % v.size()] - v[i];
    const Vec2 n{e.y, -e.x};  // outward for CCW order
    const double num = dot(n, a - v[i]);
    const double den = dot(n, d);
    if (den == 0.0) {
      if (num > 0.0) return std::nullopt;
      continue;
    }
    const double s = -num / den;
    if (den < 0.0) s_enter = std::max(s_enter, s);
    else s_exit = std::min(s_exit, s);
    if (s_enter > s_exit) return std::nullopt;
  }
  return ContactInterval{s_enter, s_exit};
}

/// Smallest s in [0, 1] with a + s (b - a) inside the closed shape.
template <class Shape>
std::optional<double> first_contact(Vec2 a, Vec2 b, const Shape& shape) {
  if (auto c = contact_interval(a, b, shape)) return c->s_in;
  return std::nullopt;
}

struct Violation {
  double time{0.0};
  Vec2 position{};
};

struct FreeSpaceVerdict {
  bool ok{true};
  std::optional<Violation> first_violation;
};

/// Checks every trajectory interval, subdivided so no piece is longer than
/// `resolution` meters, against every obstacle active during that piece.
inline FreeSpaceVerdict check_free_space(const Trajectory& traj, const ObstacleRegion& region,
                                         double resolution = 1.0) {
  if (!(resolution > 0.0)) throw std::invalid_argument("check_free_space: resolution must be > 0");
  region.validate();
  if (region.obstacles.empty() || traj.empty()) return {};

  auto test_piece = [&](Vec2 a, Vec2 b, double ta, double tb) -> std::optional<Violation> {
    std::optional<Violation> best;
    for (const auto& o : region.obstacles) {
      if (!o.active_during(ta, tb)) continue;
      auto c = std::visit([&](const auto& shape) { return contact_interval(a, b, shape); }, o.shape);
      if (!c) continue;
      double s_in = c->s_in;
      if (o.active && tb > ta) {
        const double w0 = (o.active->begin - ta) / (tb - ta);
        const double w1 = (o.active->end - ta) / (tb - ta);
        s_in = std::max(s_in, w0);
        if (s_in > std::min(c->s_out, w1)) continue;
      }
      const Violation v{ta + s_in * (tb - ta), a + s_in * (b - a)};
      if (!best || v.time < best->time) best = v;
    }
    return best;
  };

  const auto& s = traj.samples();
  if (s.size() == 1) {
    if (auto v = test_piece(s[0].q.position(), s[0].q.position(), s[0].t, s[0].t))
      return {false, v};
    return {};
  }
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const Vec2 a = s[k].q.position(), b = s[k + 1].q.position();
    const double ta = s[k].t, tb = s[k + 1].t;
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(norm(b - a) / resolution)));
    for (std::size_t j = 0; j < m; ++j) {
      const double s0 = static_cast<double>(j) / static_cast<double>(m);
      const double s1 = static_cast<double>(j + 1) / static_cast<double>(m);
      if (auto v = test_piece(a + s0 * (b - a), a + s1 * (b - a), ta + s0 * (tb - ta),
                              ta + s1 * (tb - ta)))
        return {false, v};
    }
  }
  return {};
}

}  // namespace msar::mission
