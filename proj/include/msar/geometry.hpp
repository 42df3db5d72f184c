#pragma once
// msar/geometry.hpp - planar vectors and angle helpers
//
// All positions live on a local flat tangent plane in meters. Angles are
// radians; headings are measured counter-clockwise from +x.

#include <cmath>
#include <numbers>

namespace msar {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2& operator+=(Vec2 o) noexcept { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) noexcept { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) noexcept { return {s * v.x, s * v.y}; }
  friend constexpr Vec2 operator*(Vec2 v, double s) noexcept { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) noexcept { return std::hypot(v.x, v.y); }
constexpr double norm_sq(Vec2 v) noexcept { return dot(v, v); }

inline Vec2 unit(double heading) noexcept { return {std::cos(heading), std::sin(heading)}; }

constexpr double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);  // [-pi, pi]
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

/// Rotates v into the frame of a body heading `psi`: x = along-track, y = cross-track (left).
inline Vec2 to_body(Vec2 v, double psi) noexcept {
  double c = std::cos(psi), s = std::sin(psi);
  return {c * v.x + s * v.y, -s * v.x + c * v.y};
}

}  // namespace msar
