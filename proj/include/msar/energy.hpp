#pragma once
// msar/energy.hpp - power profile and the energy budget constraint

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

namespace msar::mission {

struct PowerSegment {
  double t_begin{0.0};
  double t_end{0.0};
  double watts{0.0};
};

struct EnergyModel {
  /// Either a constant draw [W] or a piecewise-constant profile.
  std::variant<double, std::vector<PowerSegment>> power{0.0};
  double e_total{0.0};  ///< [J]

  void validate() const {
    if (!(e_total > 0.0)) throw std::invalid_argument("energy: e_total must be > 0");
    if (const auto* p = std::get_if<double>(&power)) {
      if (!(*p >= 0.0)) throw std::invalid_argument("energy: power must be >= 0");
      return;
    }
    const auto& segs = std::get<std::vector<PowerSegment>>(power);
    if (segs.empty()) throw std::invalid_argument("energy: empty power profile");
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (!(segs[i].watts >= 0.0)) throw std::invalid_argument("energy: power must be >= 0");
      if (!(segs[i].t_end > segs[i].t_begin))
        throw std::invalid_argument("energy: profile segment with non-positive duration");
      if (i > 0 && segs[i].t_begin < segs[i - 1].t_end)
        throw std::invalid_argument("energy: profile segments overlap or are unordered");
    }
  }
};

/// Exact integral of power over [t0, tf].
inline double energy_used(const EnergyModel& energy, double t0, double tf) {
  if (!(tf > t0)) throw std::invalid_argument("energy_used: requires tf > t0");
  energy.validate();
  if (const auto* p = std::get_if<double>(&energy.power)) return *p * (tf - t0);

  double used = 0.0;
  double covered_until = t0;
  for (const auto& s : std::get<std::vector<PowerSegment>>(energy.power)) {
    if (s.t_end <= t0) continue;
    if (s.t_begin >= tf) break;
    if (s.t_begin > covered_until) throw std::invalid_argument("energy_used: gap in power profile");
    const double a = std::max(s.t_begin, t0), b = std::min(s.t_end, tf);
    used += s.watts * (b - a);
    covered_until = b;
  }
  if (covered_until < tf) throw std::invalid_argument("energy_used: gap in power profile");
  return used;
}

struct EnergyVerdict {
  bool ok{true};
  double used{0.0};
  double budget{0.0};
};

/// Passes when used <= e_total. Equality passes, including a horizon that
/// ends exactly at depletion (rounding of t0 + e_total / P is absorbed).
inline EnergyVerdict check_energy(const EnergyModel& energy, double t0, double tf) {
  const double used = energy_used(energy, t0, tf);
  return {used <= energy.e_total * (1.0 + 1e-12), used, energy.e_total};
}

/// Earliest time after t0 at which the budget is exhausted; +inf if never
/// (within the profile's span for piecewise power).
inline double depletion_time(const EnergyModel& energy, double t0) {
  energy.validate();
  if (const auto* p = std::get_if<double>(&energy.power)) {
    return *p > 0.0 ? t0 + energy.e_total / *p : std::numeric_limits<double>::infinity();
  }
  double remaining = energy.e_total;
  for (const auto& s : std::get<std::vector<PowerSegment>>(energy.power)) {
    if (s.t_end <= t0) continue;
    const double a = std::max(s.t_begin, t0);
    const double e = s.watts * (s.t_end - a);
    if (e >= remaining && s.watts > 0.0) return a + remaining / s.watts;
    remaining -= e;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace msar::mission
