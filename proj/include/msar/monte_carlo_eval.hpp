#pragma once
// msar/monte_carlo_eval.hpp - Monte Carlo estimate of E[N_saved](t) and the mission objective
//
// One run samples N targets from the initial uncertainty, drifts them with
// the leeway kernel and flies the candidate trajectory over them. A target
// gets a detection look when it enters the camera footprint and again every
// detection_interval while it stays inside; each look succeeds with the POD
// at the trajectory altitude. The objective is
//
//   J = (1/N) * integral_{t0}^{tf} (N - E[N_saved](t)) dt
//
// i.e. the expected person-seconds spent waiting for rescue, per person.
//
// Random streams are hierarchical (master seed -> run -> target -> look), so
// two scenarios evaluated with the same master seed are coupled: a target
// that is detected on its k-th look under one POD is detected no later under
// any higher POD with the same look schedule.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "msar/drift_model.hpp"
#include "msar/energy.hpp"
#include "msar/geometry.hpp"
#include "msar/mission_model.hpp"
#include "msar/obstacles.hpp"
#include "msar/rng.hpp"
#include "msar/sensor_model.hpp"

namespace msar::mc {

/// Rescue follows detection instantly, or after a fixed dispatch delay.
struct RescueModel {
  double delay{0.0};  ///< [s]; 0 means instant

  static RescueModel instant() { return {0.0}; }
  static RescueModel after(double delay_s) { return {delay_s}; }
  bool is_instant() const noexcept { return delay == 0.0; }
};

struct MissionScenario {
  int n_targets{1};
  drift::InitialUncertainty uncertainty{};
  drift::EnvironmentConditions environment{};
  sensor::CameraSpec camera{};
  sensor::TargetModel target{};
  sensor::PodAxis pod_axis{sensor::PodAxis::horizontal};
  mission::Trajectory trajectory{};
  std::optional<double> detection_interval;  ///< default: along-track footprint / speed
  std::optional<double> survival_time;       ///< seconds since the accident
  RescueModel rescue{};
  double t0{0.0};  ///< search start, seconds since the accident
  double tf{0.0};
  std::uint64_t master_seed{0};

  double sim_step{1.0};  ///< simulation and series grid step [s]
  double drift_dt{10.0}; ///< step for drifting targets between the accident and t0

  mission::ObstacleRegion obstacles{};
  mission::EnergyModel energy{0.0, std::numeric_limits<double>::infinity()};
  mission::VehicleLimits limits{};
  double dynamics_bound{1.0};  ///< C in residual <= C * dt

  void validate() const {
    if (n_targets < 1) throw std::invalid_argument("scenario: n_targets must be >= 1");
    if (!(t0 >= 0.0)) throw std::invalid_argument("scenario: t0 must be >= 0");
    if (!(tf > t0)) throw std::invalid_argument("scenario: tf must be > t0");
    if (detection_interval && !(*detection_interval > 0.0))
      throw std::invalid_argument("scenario: detection_interval must be > 0");
    if (survival_time && !(*survival_time > 0.0))
      throw std::invalid_argument("scenario: survival_time must be > 0");
    if (!(rescue.delay >= 0.0)) throw std::invalid_argument("scenario: rescue delay must be >= 0");
    if (!(sim_step > 0.0) || !(drift_dt > 0.0))
      throw std::invalid_argument("scenario: sim_step and drift_dt must be > 0");
    uncertainty.validate();
    environment.validate();
    camera.validate();
    target.validate();
    trajectory.validate();
    const double eps = 1e-9 * std::max(1.0, std::abs(tf));
    if (trajectory.start_time() > t0 + eps || trajectory.end_time() < tf - eps)
      throw std::invalid_argument("scenario: trajectory does not cover [t0, tf]");
  }

  double pod() const {
    return sensor::pod_at_altitude(camera, target, {trajectory.altitude(), 0.0},
                                   sensor::Task::detection, pod_axis);
  }

  sensor::Footprint footprint() const {
    return sensor::footprint(camera, {trajectory.altitude(), 0.0});
  }

  /// One independent look per footprint transit unless configured.
  double effective_detection_interval() const {
    if (detection_interval) return *detection_interval;
    if (!(trajectory.speed() > 0.0))
      throw std::invalid_argument("scenario: detection_interval required for a zero-speed trajectory");
    return footprint().fs_v / trajectory.speed();
  }
};

struct RunResult {
  std::vector<std::optional<double>> detection_time;
  std::vector<std::optional<double>> save_time;  ///< set only for saved targets
  std::uint64_t run_seed{0};

  bool saved(std::size_t i) const { return save_time[i].has_value(); }
};

struct SavedSeries {
  std::vector<double> time;
  std::vector<double> mean;
  std::vector<double> stderr_;
};

struct EvalResult {
  SavedSeries series;
  double j{0.0};
  double j_stderr{0.0};
  std::size_t m_runs{0};
  double detected_fraction{0.0};
  double pod{0.0};
  double detection_interval{0.0};
  mission::FreeSpaceVerdict free_space;
  mission::DynamicsVerdict dynamics;
  mission::EnergyVerdict energy;

  bool feasible() const noexcept { return free_space.ok && dynamics.ok && energy.ok; }
};

inline constexpr std::size_t kMaxSeriesPoints = 10000;
inline constexpr std::uint64_t kRunStream = 0x3001;

/// Uniform grid t0, t0 + h, ..., tf. The step is widened if needed to keep the
/// grid within max_points.
inline std::vector<double> time_grid(double t0, double tf, double step,
                                     std::size_t max_points = kMaxSeriesPoints) {
  if (!(tf > t0) || !(step > 0.0)) throw std::invalid_argument("time_grid: requires tf > t0, step > 0");
  auto n = static_cast<std::size_t>(std::ceil((tf - t0) / step * (1.0 - 1e-12)));
  if (n + 1 > max_points) {
    n = max_points - 1;
    step = (tf - t0) / static_cast<double>(n);
  }
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k < n; ++k) g[k] = t0 + step * static_cast<double>(k);
  g[n] = tf;
  return g;
}

inline std::uint64_t run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
  return derive_seed(master_seed, {kRunStream, run_index});
}

namespace detail {

inline bool in_footprint(Vec2 target, const mission::Configuration& q, const sensor::Footprint& fp) {
  const Vec2 b = to_body(target - q.position(), q.psi);
  return std::abs(b.x) <= fp.fs_v / 2.0 && std::abs(b.y) <= fp.fs_h / 2.0;
}

struct Prepared {
  std::vector<double> grid;
  std::vector<mission::Configuration> vehicle;  // vehicle state on the grid
  sensor::Footprint footprint;
  double pod{0.0};
  double interval{0.0};
};

inline Prepared prepare(const MissionScenario& s) {
  s.validate();
  Prepared p;
  p.grid = time_grid(s.t0, s.tf, s.sim_step);
  p.vehicle.reserve(p.grid.size());
  for (double t : p.grid) p.vehicle.push_back(s.trajectory.state_at(t));
  p.footprint = s.footprint();
  p.pod = s.pod();
  p.interval = s.effective_detection_interval();
  return p;
}

inline RunResult simulate_prepared(const MissionScenario& s, const Prepared& p, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(s.n_targets);
  RunResult r;
  r.run_seed = seed;
  r.detection_time.assign(n, std::nullopt);
  r.save_time.assign(n, std::nullopt);

  auto targets = drift::init_ensemble(s.uncertainty, n, derive_seed(seed, {stream::kTargets}));
  if (s.t0 > 0.0) {
    targets = drift::simulate(std::move(targets), s.environment, s.t0, std::min(s.drift_dt, s.t0));
  }

  std::vector<std::uint8_t> was_inside(n, 0);
  std::vector<double> last_look(n, 0.0);
  std::vector<std::uint64_t> looks(n, 0);
  std::size_t remaining = n;
  const double interval_eps = 1e-9 * std::max(1.0, p.interval);

  for (std::size_t k = 0; k < p.grid.size() && remaining > 0; ++k) {
    const double t = p.grid[k];
    if (k > 0) targets = drift::step(std::move(targets), s.environment, t - p.grid[k - 1]);
    if (s.survival_time && t > *s.survival_time) break;
    for (std::size_t i = 0; i < n; ++i) {
      if (r.detection_time[i]) continue;
      const bool inside = in_footprint(targets.positions[i], p.vehicle[k], p.footprint);
      if (inside && (!was_inside[i] || t - last_look[i] >= p.interval - interval_eps)) {
        Rng look(derive_seed(seed, {stream::kLooks, i, looks[i]++}));
        last_look[i] = t;
        if (look.uniform() < p.pod) {
          r.detection_time[i] = t;
          --remaining;
        }
      }
      was_inside[i] = inside;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!r.detection_time[i]) continue;
    const double save = *r.detection_time[i] + s.rescue.delay;
    if (save > s.tf) continue;
    if (s.survival_time && save > *s.survival_time) continue;
    r.save_time[i] = save;
  }
  return r;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// A single Monte Carlo run; deterministic in (scenario, run_seed).
inline RunResult simulate_run(const MissionScenario& scenario, std::uint64_t seed) {
  return detail::simulate_prepared(scenario, detail::prepare(scenario), seed);
}

/// Runs m_runs independent simulations in parallel; results are ordered by run index.
inline std::vector<RunResult> simulate_runs(const MissionScenario& scenario, std::size_t m_runs) {
  const auto prepared = detail::prepare(scenario);
  std::vector<RunResult> runs(m_runs);
  detail::parallel_for(m_runs, [&](std::size_t i) {
    runs[i] = detail::simulate_prepared(scenario, prepared, run_seed(scenario.master_seed, i));
  });
  return runs;
}

/// Pointwise mean and standard error of N_saved on the grid. Per-run counts
/// are integers, so the reduction is exact and independent of run order.
inline SavedSeries saved_series(const std::vector<double>& grid, const std::vector<RunResult>& runs) {
  if (runs.size() < 2) throw std::invalid_argument("expected_saved_series: m_runs must be >= 2");
  std::vector<std::int64_t> sum(grid.size(), 0), sum_sq(grid.size(), 0);
  std::vector<double> saves;
  for (const auto& r : runs) {
    saves.clear();
    for (const auto& s : r.save_time)
      if (s) saves.push_back(*s);
    std::sort(saves.begin(), saves.end());
    std::size_t c = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      while (c < saves.size() && saves[c] <= grid[k]) ++c;
      sum[k] += static_cast<std::int64_t>(c);
      sum_sq[k] += static_cast<std::int64_t>(c * c);
    }
  }
  const double m = static_cast<double>(runs.size());
  SavedSeries out{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = static_cast<double>(sum[k]), sq = static_cast<double>(sum_sq[k]);
    out.mean[k] = s / m;
    const double var = std::max(0.0, (m * sq - s * s) / (m * (m - 1.0)));
    out.stderr_[k] = std::sqrt(var / m);
  }
  return out;
}

inline SavedSeries expected_saved_series(const MissionScenario& scenario, std::size_t m_runs) {
  if (m_runs < 2) throw std::invalid_argument("expected_saved_series: m_runs must be >= 2");
  return saved_series(time_grid(scenario.t0, scenario.tf, scenario.sim_step),
                      simulate_runs(scenario, m_runs));
}

/// Objective from a right-continuous saved-count series: the value at t_k
/// holds on [t_k, t_{k+1}). This is exact for the simulated process, whose
/// saves happen on grid points under instant rescue.
inline double objective_j(const std::vector<double>& time, const std::vector<double>& expected_saved,
                          int n_targets, double t0, double tf) {
  if (time.empty() || time.size() != expected_saved.size())
    throw std::invalid_argument("objective_j: empty or mismatched series");
  if (n_targets < 1) throw std::invalid_argument("objective_j: n_targets must be >= 1");
  if (!(tf > t0)) throw std::invalid_argument("objective_j: requires tf > t0");
  const double eps = 1e-9 * std::max(1.0, std::abs(tf));
  if (std::abs(time.front() - t0) > eps || std::abs(time.back() - tf) > eps)
    throw std::invalid_argument("objective_j: series must span [t0, tf]");
  const double n = static_cast<double>(n_targets);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < time.size(); ++k) {
    acc += (n - expected_saved[k]) * (time[k + 1] - time[k]);
  }
  return acc / n;
}

/// Per-run objective using exact save times (unsaved targets wait until tf).
inline double run_objective(const RunResult& r, double t0, double tf) {
  double acc = 0.0;
  for (const auto& s : r.save_time) acc += (s ? std::min(*s, tf) : tf) - t0;
  return acc / static_cast<double>(r.save_time.size());
}

inline EvalResult evaluate_mission(const MissionScenario& scenario, std::size_t m_runs) {
  if (m_runs < 2) throw std::invalid_argument("evaluate_mission: m_runs must be >= 2");
  const auto prepared = detail::prepare(scenario);
  std::vector<RunResult> runs(m_runs);
  detail::parallel_for(m_runs, [&](std::size_t i) {
    runs[i] = detail::simulate_prepared(scenario, prepared, run_seed(scenario.master_seed, i));
  });

  EvalResult out;
  out.m_runs = m_runs;
  out.series = saved_series(prepared.grid, runs);
  out.pod = prepared.pod;
  out.detection_interval = prepared.interval;

  // Sequential reduction in run order keeps the floating-point sums reproducible.
  double sum = 0.0, sum_sq = 0.0;
  std::size_t detected = 0;
  for (const auto& r : runs) {
    const double jr = run_objective(r, scenario.t0, scenario.tf);
    sum += jr;
    sum_sq += jr * jr;
    for (const auto& d : r.detection_time) detected += d.has_value();
  }
  const double m = static_cast<double>(m_runs);
  out.j = sum / m;
  out.j_stderr = std::sqrt(std::max(0.0, (sum_sq - sum * sum / m) / (m - 1.0)) / m);
  out.detected_fraction = static_cast<double>(detected) / (m * scenario.n_targets);

  out.free_space = mission::check_free_space(scenario.trajectory, scenario.obstacles);
  out.dynamics = mission::check_dynamics(scenario.trajectory, scenario.limits, scenario.dynamics_bound);
  out.energy = mission::check_energy(scenario.energy, scenario.t0, scenario.tf);
  return out;
}

}  // namespace msar::mc
