#pragma once
// msar/search_metrics.hpp - POC, POS and the POS-maximizing search altitude
//
// POC here is the single-frame containment probability under a uniform
// target prior: footprint area over search area, clamped at 1. POS is the
// product POC * POD. Mission-level (cumulative) success is estimated by
// msar/monte_carlo_eval.hpp instead.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "msar/drift_model.hpp"
#include "msar/sensor_model.hpp"

namespace msar::metrics {

using drift::SearchArea;
using sensor::CameraSpec;
using sensor::Footprint;
using sensor::TargetModel;

struct PosSample {
  double altitude{0.0};
  double poc{0.0};
  double pod{0.0};
  double pos{0.0};
};

struct PosCurve {
  std::vector<PosSample> samples;
  double h_min{0.0};
  double h_max{0.0};
  double step{0.0};
};

struct OptimalAltitude {
  double h_star{0.0};
  double pos_star{0.0};
  bool tie{false};  ///< several altitudes share the maximum; h_star is the lowest
};

/// Options shared by the curve and optimizer.
struct PodOptions {
  sensor::Task task{sensor::Task::detection};
  sensor::PodAxis axis{sensor::PodAxis::horizontal};
};

inline double poc(const Footprint& fp, const SearchArea& area) {
  if (!(fp.fs_h > 0.0 && fp.fs_v > 0.0)) throw std::invalid_argument("poc: footprint must be > 0");
  area.validate();
  return std::min(1.0, fp.area() / area.area());
}

inline double pos(double poc_value, double pod_value) {
  if (!(poc_value >= 0.0 && poc_value <= 1.0) || !(pod_value >= 0.0 && pod_value <= 1.0))
    throw std::invalid_argument("pos: probabilities must lie in [0, 1]");
  return poc_value * pod_value;
}

inline PosSample pos_at(const CameraSpec& camera, const TargetModel& target, const SearchArea& area,
                        double altitude, const PodOptions& opt = {}) {
  const sensor::ViewGeometry view{altitude, 0.0};
  PosSample s;
  s.altitude = altitude;
  s.poc = poc(sensor::footprint(camera, view), area);
  s.pod = sensor::pod_at_altitude(camera, target, view, opt.task, opt.axis);
  s.pos = pos(s.poc, s.pod);
  return s;
}

namespace detail {
inline void check_range(double h_min, double h_max) {
  if (!(h_min > 0.0 && h_min < h_max))
    throw std::invalid_argument("altitude range: requires 0 < h_min < h_max");
}
}  // namespace detail

inline PosCurve pos_curve(const CameraSpec& camera, const TargetModel& target,
                          const SearchArea& area, double h_min, double h_max,
                          std::size_t n_samples, const PodOptions& opt = {}) {
  detail::check_range(h_min, h_max);
  if (n_samples < 3) throw std::invalid_argument("pos_curve: n_samples must be >= 3");
  PosCurve c;
  c.h_min = h_min;
  c.h_max = h_max;
  c.step = (h_max - h_min) / static_cast<double>(n_samples - 1);
  c.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double h = (i + 1 == n_samples) ? h_max : h_min + c.step * static_cast<double>(i);
    c.samples.push_back(pos_at(camera, target, area, h, opt));
  }
  return c;
}

inline constexpr std::size_t kCoarseGridPoints = 1024;

/// Global POS maximizer on [h_min, h_max]. A coarse grid scan brackets the best
/// sample, golden-section search refines inside the bracket, and the refined
/// point is kept only if it beats the best grid sample. No unimodality is
/// assumed; ties resolve to the lowest altitude.
inline OptimalAltitude optimal_altitude(const CameraSpec& camera, const TargetModel& target,
                                        const SearchArea& area, double h_min, double h_max,
                                        double tolerance, const PodOptions& opt = {}) {
  detail::check_range(h_min, h_max);
  if (!(tolerance > 0.0)) throw std::invalid_argument("optimal_altitude: tolerance must be > 0");
  auto f = [&](double h) { return pos_at(camera, target, area, h, opt).pos; };

  if (h_max - h_min <= tolerance) {
    const double lo = f(h_min), hi = f(h_max);
    if (hi > lo) return {h_max, hi, false};
    return {h_min, lo, hi == lo};
  }

  const PosCurve grid = pos_curve(camera, target, area, h_min, h_max, kCoarseGridPoints, opt);
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.samples.size(); ++i) {
    if (grid.samples[i].pos > grid.samples[best].pos) best = i;
  }
  const double best_pos = grid.samples[best].pos;
  const auto ties = std::count_if(grid.samples.begin(), grid.samples.end(),
                                  [&](const PosSample& s) { return s.pos == best_pos; });
  if (ties > 1) return {grid.samples[best].altitude, best_pos, true};

  double a = grid.samples[best == 0 ? 0 : best - 1].altitude;
  double b = grid.samples[std::min(best + 1, grid.samples.size() - 1)].altitude;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance * 1e-3) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a); fd = f(d);
    }
  }
  const double h = 0.5 * (a + b);
  const double fh = f(h);
  if (fh > best_pos) return {h, fh, false};
  return {grid.samples[best].altitude, best_pos, false};
}

}  // namespace msar::metrics
