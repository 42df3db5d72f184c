#include <gtest/gtest.h>

#include <cmath>

#include "msar/monte_carlo_eval.hpp"
#include "msar/patterns.hpp"
#include "test_util.hpp"

using namespace msar;
using namespace msar::mc;
using msar::testing::example_camera;
using msar::testing::example_target;

namespace {

mission::Trajectory hover(Vec2 p, double t0, double tf, double altitude) {
  return mission::Trajectory({{t0, {p.x, p.y, 0.0}, {}}, {tf, {p.x, p.y, 0.0}, {}}}, altitude, 0.0);
}

// Static targets clustered at the origin under a hovering camera.
MissionScenario hover_scenario(double altitude, double tf, double interval, int n_targets = 1) {
  MissionScenario s;
  s.n_targets = n_targets;
  s.uncertainty = {{0.0, 0.0}, drift::Square{1.0}};
  s.camera = example_camera();
  s.target = example_target();
  s.trajectory = hover({0.0, 0.0}, 0.0, tf, altitude);
  s.detection_interval = interval;
  s.t0 = 0.0;
  s.tf = tf;
  s.master_seed = 1234;
  return s;
}

}  // namespace

TEST(ObjectiveJ, AnalyticExamples) {
  // N = 2 on [0, 10]; one target saved at t = 4 with certainty.
  std::vector<double> t, saved;
  for (int k = 0; k <= 10; ++k) {
    t.push_back(k);
    saved.push_back(k >= 4 ? 1.0 : 0.0);
  }
  EXPECT_EQ(objective_j(t, saved, 2, 0.0, 10.0), 7.0);
  EXPECT_EQ(objective_j({0.0, 600.0}, {0.0, 0.0}, 3, 0.0, 600.0), 600.0);
  EXPECT_EQ(objective_j({0.0, 300.0, 600.0}, {3.0, 3.0, 3.0}, 3, 0.0, 600.0), 0.0);
}

TEST(ObjectiveJ, RejectsBadSeries) {
  EXPECT_THROW(objective_j({}, {}, 1, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(objective_j({0.0, 1.0}, {0.0}, 1, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(objective_j({0.0, 0.5}, {0.0, 0.0}, 1, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(objective_j({0.0, 1.0}, {0.0, 0.0}, 0, 0.0, 1.0), std::invalid_argument);
}

TEST(TimeGrid, EndpointsAndCap) {
  const auto g = time_grid(10.0, 20.5, 1.0);
  EXPECT_EQ(g.front(), 10.0);
  EXPECT_EQ(g.back(), 20.5);
  EXPECT_EQ(g.size(), 12u);
  const auto capped = time_grid(0.0, 1e6, 1.0);
  EXPECT_EQ(capped.size(), kMaxSeriesPoints);
  EXPECT_EQ(capped.back(), 1e6);
}

TEST(Scenario, ValidatesInvariants) {
  auto s = hover_scenario(100.0, 100.0, 10.0);
  EXPECT_NO_THROW(s.validate());
  s.n_targets = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = hover_scenario(100.0, 100.0, 10.0);
  s.tf = 200.0;  // trajectory ends at 100
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = hover_scenario(100.0, 100.0, 10.0);
  s.detection_interval = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = hover_scenario(100.0, 100.0, 10.0);
  s.survival_time = -1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = hover_scenario(100.0, 100.0, 10.0);
  s.detection_interval.reset();
  EXPECT_THROW(s.effective_detection_interval(), std::invalid_argument);
}

TEST(SimulateRun, PodZeroNeverDetects) {
  auto s = hover_scenario(1e130, 600.0, 10.0, 3);
  ASSERT_EQ(s.pod(), 0.0);
  const auto r = evaluate_mission(s, 50);
  EXPECT_EQ(r.detected_fraction, 0.0);
  EXPECT_EQ(r.j, 600.0);
  EXPECT_EQ(objective_j(r.series.time, r.series.mean, s.n_targets, s.t0, s.tf), 600.0);
  for (double v : r.series.mean) EXPECT_EQ(v, 0.0);
}

TEST(SimulateRun, CertainDetectionSavesEveryoneAtStart) {
  auto s = hover_scenario(10.0, 300.0, 10.0, 4);
  ASSERT_EQ(s.pod(), 1.0);
  const auto r = evaluate_mission(s, 20);
  EXPECT_EQ(r.detected_fraction, 1.0);
  EXPECT_EQ(r.j, 0.0);
  for (double v : r.series.mean) EXPECT_EQ(v, 4.0);
  const auto run = simulate_run(s, 99);
  for (const auto& t : run.save_time) EXPECT_EQ(*t, 0.0);
}

TEST(SimulateRun, GeometricTrials) {
  const double p = 0.3;
  const double h = sensor::altitude_for_pod(example_camera(), example_target(), sensor::Task::detection, p);
  auto s = hover_scenario(h, 95.0, 10.0);  // looks at 0, 10, ..., 90
  ASSERT_NEAR(s.pod(), p, 1e-9);
  const std::size_t m = 4000;
  const auto runs = simulate_runs(s, m);
  std::size_t hits = 0;
  for (const auto& r : runs) hits += r.detection_time[0].has_value();
  const double expected = 1.0 - std::pow(1.0 - p, 10);
  const double se = std::sqrt(expected * (1.0 - expected) / m);
  EXPECT_NEAR(static_cast<double>(hits) / m, expected, 3.0 * se);
}

TEST(SimulateRun, DeterministicAndSeedSensitive) {
  auto s = hover_scenario(400.0, 200.0, 10.0, 5);
  const auto a = simulate_run(s, 7), b = simulate_run(s, 7), c = simulate_run(s, 8);
  EXPECT_EQ(a.detection_time, b.detection_time);
  EXPECT_EQ(a.save_time, b.save_time);
  EXPECT_NE(a.detection_time, c.detection_time);
}

TEST(SimulateRun, SaveTimeOrderingAndHorizon) {
  auto s = hover_scenario(400.0, 200.0, 10.0, 5);
  s.rescue = RescueModel::after(55.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = simulate_run(s, seed);
    for (std::size_t i = 0; i < r.save_time.size(); ++i) {
      if (r.detection_time[i]) EXPECT_GE(*r.detection_time[i], s.t0);
      if (r.save_time[i]) {
        ASSERT_TRUE(r.detection_time[i]);
        EXPECT_EQ(*r.save_time[i], *r.detection_time[i] + 55.0);
        EXPECT_LE(*r.save_time[i], s.tf);
      }
    }
  }
}

TEST(SimulateRun, SurvivalCutoff) {
  // Search starts after the survival window: nobody can be saved.
  auto s = hover_scenario(10.0, 300.0, 10.0, 3);
  s.t0 = 100.0;
  s.trajectory = hover({0.0, 0.0}, 100.0, 300.0, 10.0);
  s.survival_time = 50.0;
  const auto r = evaluate_mission(s, 10);
  EXPECT_EQ(r.detected_fraction, 0.0);
  EXPECT_EQ(r.j, 200.0);

  s.survival_time = 150.0;
  s.rescue = RescueModel::after(60.0);  // detection at 100, rescue at 160 is too late
  EXPECT_EQ(evaluate_mission(s, 10).j, 200.0);
}

TEST(SavedSeries, MonotoneBoundedAndJNormalized) {
  auto s = hover_scenario(500.0, 300.0, 15.0, 6);
  s.environment = {{0.1, 0.0}, {5.0, 0.0}, 0.02, 1.0};
  s.uncertainty = {{0.0, 0.0}, drift::Square{200.0}};
  const auto r = evaluate_mission(s, 200);
  for (std::size_t k = 0; k < r.series.mean.size(); ++k) {
    EXPECT_GE(r.series.mean[k], 0.0);
    EXPECT_LE(r.series.mean[k], 6.0);
    if (k > 0) EXPECT_GE(r.series.mean[k], r.series.mean[k - 1]);
  }
  EXPECT_GE(r.j, 0.0);
  EXPECT_LE(r.j, s.tf - s.t0);
  // Saves land on the grid under instant rescue, so both estimators agree.
  EXPECT_NEAR(objective_j(r.series.time, r.series.mean, 6, s.t0, s.tf), r.j, 1e-9 * r.j);
}

TEST(SavedSeries, ExhaustiveEnumerationTwoCellWorld) {
  // The camera alternates every 10 s between the target's cell and an empty
  // one; a long look interval makes each visit exactly one look.
  const double p = 0.4;
  const double h = sensor::altitude_for_pod(example_camera(), example_target(), sensor::Task::detection, p);
  std::vector<mission::TrajectorySample> samples;
  for (int t = 0; t <= 99; ++t) {
    const double x = ((t / 10) % 2 == 0) ? 0.0 : 5000.0;
    samples.push_back({static_cast<double>(t), {x, 0.0, 0.0}, {}});
  }
  auto s = hover_scenario(h, 99.0, 1000.0);
  s.trajectory = mission::Trajectory(samples, h, 0.0);
  const std::size_t m = 4000;
  const auto series = expected_saved_series(s, m);

  // Enumerate all outcome sequences of the k looks made by time t.
  auto exact = [&](double t) {
    const int looks = static_cast<int>(t) / 20 + 1;
    double prob = 0.0;
    for (int mask = 0; mask < (1 << looks); ++mask) {
      double w = 1.0;
      for (int j = 0; j < looks; ++j) w *= (mask >> j & 1) ? p : 1.0 - p;
      if (mask != 0) prob += w;
    }
    return prob;
  };
  for (std::size_t k = 0; k < series.time.size(); ++k) {
    const double e = exact(series.time[k]);
    const double se = std::max(series.stderr_[k], std::sqrt(e * (1.0 - e) / m));
    EXPECT_NEAR(series.mean[k], e, 3.0 * se + 1e-12) << "t=" << series.time[k];
  }
  EXPECT_NEAR(exact(90.0), 1.0 - std::pow(1.0 - p, 5), 1e-12);
}

TEST(SavedSeries, RequiresTwoRuns) {
  EXPECT_THROW(expected_saved_series(hover_scenario(100.0, 10.0, 1.0), 1), std::invalid_argument);
  EXPECT_THROW(evaluate_mission(hover_scenario(100.0, 10.0, 1.0), 1), std::invalid_argument);
}

TEST(Coupling, HigherPodNeverIncreasesJOnMatchedSeeds) {
  // The footprint covers every target at all three altitudes.
  double prev_j = -1.0;
  for (double h : {150.0, 300.0, 450.0}) {
    auto s = hover_scenario(h, 200.0, 10.0, 5);
    const auto runs = simulate_runs(s, 300);
    double j = 0.0;
    for (const auto& r : runs) j += run_objective(r, s.t0, s.tf);
    EXPECT_GE(j, prev_j);
    prev_j = j;
  }
  // Pathwise as well.
  auto lo = hover_scenario(200.0, 200.0, 10.0, 5), hi = hover_scenario(400.0, 200.0, 10.0, 5);
  const auto a = simulate_runs(lo, 200), b = simulate_runs(hi, 200);
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_LE(run_objective(a[i], 0.0, 200.0), run_objective(b[i], 0.0, 200.0));
}

TEST(EvaluateMission, BitIdenticalRepeats) {
  auto s = hover_scenario(500.0, 300.0, 15.0, 6);
  s.environment = {{0.1, 0.0}, {5.0, 0.0}, 0.02, 1.0};
  s.uncertainty = {{0.0, 0.0}, drift::Square{200.0}};
  const auto a = evaluate_mission(s, 100), b = evaluate_mission(s, 100);
  EXPECT_EQ(a.j, b.j);
  EXPECT_EQ(a.j_stderr, b.j_stderr);
  EXPECT_EQ(a.series.mean, b.series.mean);
  EXPECT_EQ(a.series.stderr_, b.series.stderr_);
}

TEST(EvaluateMission, ReportsConstraintFailuresAlongsideJ) {
  auto s = hover_scenario(400.0, 100.0, 10.0, 2);
  s.obstacles.obstacles.push_back({mission::DiscShape{{0.0, 0.0}, 5.0}, std::nullopt});
  s.energy = {100.0, 5000.0};  // needs 10000 J
  const auto r = evaluate_mission(s, 10);
  EXPECT_FALSE(r.free_space.ok);
  EXPECT_FALSE(r.energy.ok);
  EXPECT_FALSE(r.feasible());
  EXPECT_GT(r.j, 0.0);

  s.obstacles = {};
  s.energy = {100.0, 10000.0};
  EXPECT_TRUE(evaluate_mission(s, 10).feasible());
}

TEST(EvaluateMission, TighterLawnmowerNoWorseOnMatchedSeeds) {
  const auto area = drift::SearchArea::centered({0.0, 0.0}, 1200.0, 1200.0);
  const double h = 400.0;
  const auto fp = sensor::footprint(example_camera(), {h, 0.0});
  mission::PatternOptions opt;
  const auto tight_plain = mission::generate_lawnmower(area, fp.fs_h, 20.0, h, opt);
  opt.hold_until = tight_plain.end_time();

  auto make = [&](double spacing) {
    MissionScenario s;
    s.n_targets = 10;
    s.uncertainty = {{0.0, 0.0}, drift::Square{1200.0}};
    s.camera = example_camera();
    s.target = example_target();
    s.trajectory = mission::generate_lawnmower(area, spacing, 20.0, h, opt);
    s.tf = *opt.hold_until;
    s.master_seed = 77;
    return s;
  };
  const auto tight = evaluate_mission(make(fp.fs_h), 300);
  const auto sparse = evaluate_mission(make(2.0 * fp.fs_h), 300);
  EXPECT_LE(tight.j, sparse.j);
  EXPECT_GT(tight.detected_fraction, sparse.detected_fraction);
}

TEST(Convergence, StderrHalvesWithFourTimesRuns) {
  auto s = hover_scenario(450.0, 60.0, 10.0, 3);
  s.uncertainty = {{0.0, 0.0}, drift::Square{400.0}};
  const auto a = expected_saved_series(s, 500);
  const auto b = expected_saved_series(s, 2000);
  const double ratio = b.stderr_.back() / a.stderr_.back();
  EXPECT_NEAR(ratio, 0.5, 0.15);
}
