#pragma once
// msar/mission_model.hpp - vehicle configuration, unicycle dynamics and trajectories
//
// The vehicle flies at constant altitude, so its configuration is planar,
// q = [x, y, psi], and evolves under the unicycle model
//
//   q_dot = [u cos(psi), u sin(psi), omega]
//
// integrated with explicit Euler. Trajectories keep the control applied on
// each sample interval so the discrete dynamics residual can be checked.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "msar/geometry.hpp"

namespace msar::mission {

struct Configuration {
  double x{0.0};
  double y{0.0};
  double psi{0.0};  ///< heading, wrapped to (-pi, pi]

  Vec2 position() const noexcept { return {x, y}; }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ControlInput {
  double u{0.0};      ///< forward speed [m/s]
  double omega{0.0};  ///< yaw rate [rad/s]
  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

struct VehicleLimits {
  double u_max{std::numeric_limits<double>::infinity()};
  double omega_max{std::numeric_limits<double>::infinity()};

  void check(const ControlInput& c) const {
    if (!(c.u >= 0.0 && c.u <= u_max)) throw std::invalid_argument("control: u outside [0, u_max]");
    if (!(std::abs(c.omega) <= omega_max))
      throw std::invalid_argument("control: |omega| exceeds omega_max");
  }
};

/// Explicit Euler step of the unicycle model.
inline Configuration unicycle_step(const Configuration& q, const ControlInput& ctrl, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("unicycle_step: dt must be > 0");
  return {q.x + ctrl.u * std::cos(q.psi) * dt, q.y + ctrl.u * std::sin(q.psi) * dt,
          wrap_angle(q.psi + ctrl.omega * dt)};
}

struct TrajectorySample {
  double t{0.0};
  Configuration q{};
  ControlInput ctrl{};  ///< applied on [t, t_next)
  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<TrajectorySample> samples, double altitude, double speed)
      : samples_(std::move(samples)), altitude_(altitude), speed_(speed) {
    validate();
  }

  const std::vector<TrajectorySample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double altitude() const noexcept { return altitude_; }
  double speed() const noexcept { return speed_; }
  double start_time() const { return samples_.front().t; }
  double end_time() const { return samples_.back().t; }

  Trajectory with_altitude(double altitude) const {
    Trajectory t = *this;
    t.altitude_ = altitude;
    return t;
  }

  void validate() const {
    if (samples_.empty()) throw std::invalid_argument("trajectory: no samples");
    for (std::size_t k = 1; k < samples_.size(); ++k) {
      if (!(samples_[k].t > samples_[k - 1].t))
        throw std::invalid_argument("trajectory: times must be strictly increasing");
    }
    if (!(altitude_ > 0.0)) throw std::invalid_argument("trajectory: altitude must be > 0");
    if (!(speed_ >= 0.0)) throw std::invalid_argument("trajectory: speed must be >= 0");
  }

  /// Speed-consistency invariant: |dp| <= u_max dt + eps on every interval.
  bool respects_speed(double u_max, double eps = 1e-9) const {
    for (std::size_t k = 1; k < samples_.size(); ++k) {
      const double dt = samples_[k].t - samples_[k - 1].t;
      const double dp = norm(samples_[k].q.position() - samples_[k - 1].q.position());
      if (dp > u_max * dt + eps) return false;
    }
    return true;
  }

  /// Configuration at time t; exact for Euler-generated samples because the
  /// velocity is constant on each interval. Clamps outside the time span.
  Configuration state_at(double t) const {
    if (t <= samples_.front().t) return samples_.front().q;
    if (t >= samples_.back().t) return samples_.back().q;
    auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                               [](double v, const TrajectorySample& s) { return v < s.t; });
    const TrajectorySample& a = *(it - 1);
    const TrajectorySample& b = *it;
    const double s = (t - a.t) / (b.t - a.t);
    const Vec2 p = a.q.position() + s * (b.q.position() - a.q.position());
    const double dpsi = wrap_angle(b.q.psi - a.q.psi);
    return {p.x, p.y, wrap_angle(a.q.psi + s * dpsi)};
  }

  double path_length() const {
    double len = 0.0;
    for (std::size_t k = 1; k < samples_.size(); ++k)
      len += norm(samples_[k].q.position() - samples_[k - 1].q.position());
    return len;
  }

 private:
  std::vector<TrajectorySample> samples_;
  double altitude_{1.0};
  double speed_{0.0};
};

/// Constant control held over [t_begin, t_end].
struct ControlSegment {
  double t_begin{0.0};
  double t_end{0.0};
  ControlInput input{};
};

/// Integrates contiguous control segments from q0 with step dt. Each segment
/// ends on a sample, so switching times are exact.
inline Trajectory integrate_trajectory(const Configuration& q0,
                                       const std::vector<ControlSegment>& controls, double dt,
                                       double altitude, const VehicleLimits& limits = {},
                                       std::optional<double> nominal_speed = std::nullopt) {
  if (controls.empty()) throw std::invalid_argument("integrate_trajectory: empty control sequence");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_trajectory: dt must be > 0");
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const auto& c = controls[i];
    if (!(c.t_end > c.t_begin))
      throw std::invalid_argument("integrate_trajectory: segment with non-positive duration");
    if (i > 0 && c.t_begin != controls[i - 1].t_end)
      throw std::invalid_argument("integrate_trajectory: gap or overlap in control coverage");
    limits.check(c.input);
  }

  std::vector<TrajectorySample> out;
  Configuration q{q0.x, q0.y, wrap_angle(q0.psi)};
  double max_u = 0.0;
  for (const auto& seg : controls) {
    max_u = std::max(max_u, seg.input.u);
    const double span = seg.t_end - seg.t_begin;
    const auto n = static_cast<std::size_t>(std::ceil(span / dt * (1.0 - 1e-12)));
    for (std::size_t k = 0; k < n; ++k) {
      const double t = seg.t_begin + static_cast<double>(k) * dt;
      const double t_next = (k + 1 == n) ? seg.t_end : seg.t_begin + static_cast<double>(k + 1) * dt;
      out.push_back({t, q, seg.input});
      q = unicycle_step(q, seg.input, t_next - t);
    }
  }
  out.push_back({controls.back().t_end, q, controls.back().input});
  return Trajectory(std::move(out), altitude, nominal_speed.value_or(max_u));
}

/// Recovers per-interval controls from positions and headings, e.g. after
/// importing a trajectory that carries no control record. Speed is the
/// along-heading velocity component; any lateral slip stays visible to
/// check_dynamics as residual.
inline std::vector<TrajectorySample> infer_controls(std::vector<TrajectorySample> samples) {
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double dt = samples[k + 1].t - samples[k].t;
    const Vec2 v = (1.0 / dt) * (samples[k + 1].q.position() - samples[k].q.position());
    samples[k].ctrl = {std::max(0.0, dot(v, unit(samples[k].q.psi))),
                       wrap_angle(samples[k + 1].q.psi - samples[k].q.psi) / dt};
  }
  if (samples.size() >= 2) samples.back().ctrl = samples[samples.size() - 2].ctrl;
  return samples;
}

struct DynamicsVerdict {
  bool ok{true};
  double max_residual{0.0};        ///< max over k of |(q_{k+1} - q_k)/dt - f(q_k, u_k)|
  double max_residual_over_dt{0.0};
  double max_speed{0.0};
  double max_yaw_rate{0.0};
};

/// Discrete residual of the dynamics constraint plus the control bounds.
/// A trajectory passes when every interval satisfies residual <= c_bound * dt.
inline DynamicsVerdict check_dynamics(const Trajectory& traj, const VehicleLimits& limits,
                                      double c_bound = 1.0) {
  DynamicsVerdict v;
  const auto& s = traj.samples();
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double dt = s[k + 1].t - s[k].t;
    const auto& c = s[k].ctrl;
    const double rx = (s[k + 1].q.x - s[k].q.x) / dt - c.u * std::cos(s[k].q.psi);
    const double ry = (s[k + 1].q.y - s[k].q.y) / dt - c.u * std::sin(s[k].q.psi);
    const double rpsi = wrap_angle(s[k + 1].q.psi - s[k].q.psi) / dt - c.omega;
    const double r = std::sqrt(rx * rx + ry * ry + rpsi * rpsi);
    v.max_residual = std::max(v.max_residual, r);
    v.max_residual_over_dt = std::max(v.max_residual_over_dt, r / dt);
    v.max_speed = std::max(v.max_speed, norm(s[k + 1].q.position() - s[k].q.position()) / dt);
    v.max_yaw_rate = std::max(v.max_yaw_rate, std::abs(c.omega));
  }
  v.ok = v.max_residual_over_dt <= c_bound && v.max_speed <= limits.u_max + 1e-9 &&
         v.max_yaw_rate <= limits.omega_max + 1e-9;
  return v;
}

}  // namespace msar::mission
