#pragma once
// msar/drift_model.hpp - particle leeway drift for a person-in-water
//
// Self-contained Euler-Maruyama leeway kernel:
//
//   x <- x + (current + leeway_fraction * wind) dt + sqrt(2 D dt) eta,   eta ~ N(0, I2)
//
// Forcing is spatially uniform and constant in time. Each particle draws its
// noise from a stream keyed by (seed, particle index, step index), so a run
// is reproducible regardless of how particles are scheduled.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

#include "msar/geometry.hpp"
#include "msar/rng.hpp"

namespace msar::drift {

struct EnvironmentConditions {
  Vec2 current{};              ///< [m/s]
  Vec2 wind{};                 ///< 10 m wind [m/s]
  double leeway_fraction{0.0}; ///< fraction of wind speed imparted to the drifting object
  double diffusion{0.0};       ///< horizontal diffusivity [m^2/s]

  void validate() const {
    if (!(leeway_fraction >= 0.0 && leeway_fraction <= 0.1))
      throw std::invalid_argument("environment: leeway_fraction must lie in [0, 0.1]");
    if (!(diffusion >= 0.0)) throw std::invalid_argument("environment: diffusion must be >= 0");
  }

  Vec2 drift_velocity() const noexcept { return current + leeway_fraction * wind; }
};

struct Square { double side{0.0}; };
struct Disk { double radius{0.0}; };

struct InitialUncertainty {
  Vec2 center{};
  std::variant<Square, Disk> shape{Square{800.0}};

  void validate() const {
    bool ok = std::visit([](const auto& s) {
      if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Square>) return s.side > 0.0;
      else return s.radius > 0.0;
    }, shape);
    if (!ok) throw std::invalid_argument("uncertainty: shape size must be > 0");
  }
};

struct ParticleEnsemble {
  std::vector<Vec2> positions;
  double time{0.0};           ///< seconds since the accident
  std::uint64_t seed{0};
  std::uint64_t steps_taken{0};

  std::size_t count() const noexcept { return positions.size(); }
};

/// Axis-aligned search rectangle.
struct SearchArea {
  Vec2 min{};
  Vec2 max{};

  static SearchArea centered(Vec2 center, double width, double height) {
    SearchArea a{{center.x - width / 2, center.y - height / 2},
                 {center.x + width / 2, center.y + height / 2}};
    a.validate();
    return a;
  }

  double width() const noexcept { return max.x - min.x; }
  double height() const noexcept { return max.y - min.y; }
  double area() const noexcept { return width() * height(); }
  Vec2 center() const noexcept { return 0.5 * (min + max); }
  bool contains(Vec2 p) const noexcept {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }

  void validate() const {
    if (!(width() > 0.0 && height() > 0.0))
      throw std::invalid_argument("search area: width and height must be > 0");
  }
};

// -----------------------------------------------------------------------

/// Samples `count` particles uniformly over the initial uncertainty shape.
inline ParticleEnsemble init_ensemble(const InitialUncertainty& uncertainty, std::size_t count,
                                      std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("init_ensemble: count must be >= 1");
  uncertainty.validate();
  ParticleEnsemble e;
  e.seed = seed;
  e.positions.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, {stream::kInitialPosition, i}));
    Vec2 offset;
    if (const auto* sq = std::get_if<Square>(&uncertainty.shape)) {
      const double h = sq->side / 2;
      offset = {rng.uniform(-h, h), rng.uniform(-h, h)};
    } else {
      const double r = std::get<Disk>(uncertainty.shape).radius * std::sqrt(rng.uniform());
      offset = r * unit(rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
    e.positions[i] = uncertainty.center + offset;
  }
  return e;
}

/// One Euler-Maruyama step of length dt.
inline ParticleEnsemble step(ParticleEnsemble ensemble, const EnvironmentConditions& env, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("drift step: dt must be > 0");
  env.validate();
  const Vec2 advect = env.drift_velocity() * dt;
  const double sigma = std::sqrt(2.0 * env.diffusion * dt);
  for (std::size_t i = 0; i < ensemble.positions.size(); ++i) {
    Vec2& p = ensemble.positions[i];
    p += advect;
    if (sigma > 0.0) {
      Rng rng(derive_seed(ensemble.seed, {stream::kDiffusion, i, ensemble.steps_taken}));
      auto [gx, gy] = rng.normal_pair();
      p += Vec2{sigma * gx, sigma * gy};
    }
  }
  ensemble.time += dt;
  ++ensemble.steps_taken;
  return ensemble;
}

using SnapshotObserver = std::function<void(const ParticleEnsemble&)>;

/// Advances the ensemble by `duration` in ceil(duration / dt) steps; the last
/// step is shortened so the final time is exactly start + duration. The
/// observer, when given, sees the initial state and every subsequent state.
inline ParticleEnsemble simulate(ParticleEnsemble ensemble, const EnvironmentConditions& env,
                                 double duration, double dt, const SnapshotObserver& observer = {}) {
  if (!(dt > 0.0) || !(duration >= dt))
    throw std::invalid_argument("simulate: requires duration >= dt > 0");
  const auto n = static_cast<std::uint64_t>(std::ceil(duration / dt * (1.0 - 1e-12)));
  if (observer) observer(ensemble);
  double elapsed = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double h = (k + 1 == n) ? duration - elapsed : dt;
    ensemble = step(std::move(ensemble), env, h);
    elapsed += h;
    if (observer) observer(ensemble);
  }
  return ensemble;
}

/// Snapshot series convenience wrapper.
inline std::vector<ParticleEnsemble> simulate_snapshots(ParticleEnsemble ensemble,
                                                        const EnvironmentConditions& env,
                                                        double duration, double dt) {
  std::vector<ParticleEnsemble> out;
  simulate(std::move(ensemble), env, duration, dt,
           [&](const ParticleEnsemble& e) { out.push_back(e); });
  return out;
}

inline Vec2 centroid(const ParticleEnsemble& ensemble) {
  Vec2 c{};
  for (Vec2 p : ensemble.positions) c += p;
  return (1.0 / static_cast<double>(ensemble.count())) * c;
}

/// Box holding the central `quantile` fraction of particles on each axis;
/// quantile = 1 gives the plain min/max box.
inline SearchArea bounding_area(const ParticleEnsemble& ensemble, double quantile = 1.0) {
  if (ensemble.positions.empty()) throw std::invalid_argument("bounding_area: empty ensemble");
  if (!(quantile > 0.0 && quantile <= 1.0))
    throw std::invalid_argument("bounding_area: quantile must lie in (0, 1]");

  auto range = [&](auto coord) {
    std::vector<double> v;
    v.reserve(ensemble.count());
    for (Vec2 p : ensemble.positions) v.push_back(coord(p));
    if (quantile == 1.0) {
      auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return std::pair{*lo, *hi};
    }
    std::sort(v.begin(), v.end());
    const double last = static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor((1.0 - quantile) / 2.0 * last));
    const auto hi = static_cast<std::size_t>(std::ceil((1.0 + quantile) / 2.0 * last));
    return std::pair{v[lo], v[hi]};
  };
  auto [x0, x1] = range([](Vec2 p) { return p.x; });
  auto [y0, y1] = range([](Vec2 p) { return p.y; });
  SearchArea area{{x0, y0}, {x1, y1}};
  if (!(area.width() > 0.0 && area.height() > 0.0))
    throw std::invalid_argument("bounding_area: degenerate ensemble (zero width or height)");
  return area;
}

}  // namespace msar::drift
