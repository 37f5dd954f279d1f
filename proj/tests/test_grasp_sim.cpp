// Detachment engine: determinism, the force ramp contract, guaranteed
// hold/detach constructions, Monte Carlo statistics, mission loads, and
// the re-latch window calibration.

#include "gripsim/grasp_sim.hpp"

#include "gripsim/common.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace gripsim;

namespace {

bool traces_identical(const DetachmentTrace& a, const DetachmentTrace& b) {
  if (a.max_force_n != b.max_force_n) return false;
  if (a.detached != b.detached) return false;
  if (a.first_slip_force_n.has_value() != b.first_slip_force_n.has_value()) {
    return false;
  }
  if (a.first_slip_force_n &&
      *a.first_slip_force_n != *b.first_slip_force_n) {
    return false;
  }
  if (a.samples.size() != b.samples.size()) return false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const TraceSample& sa = a.samples[i];
    const TraceSample& sb = b.samples[i];
    if (sa.time_s != sb.time_s) return false;
    if (sa.applied_force_n != sb.applied_force_n) return false;
    if (sa.finger_load_n != sb.finger_load_n) return false;
    if (sa.slip_count_cum != sb.slip_count_cum) return false;
    if (sa.slip_events.size() != sb.slip_events.size()) return false;
  }
  return true;
}

// Scenario where every slip re-latches onto an identical asperity, so the
// grasp can never lose a spine and must ride the ramp to the cap.
GraspScenario unbreakable_scenario() {
  GraspScenario s = default_scenario();
  s.tuning.force_cap_n = 50.0;
  s.tuning.relatch.floor = 1.0;  // certain re-latch at any tension
  s.target.asperity.slope.min_rad = deg_to_rad(35.0);
  s.target.asperity.slope.max_rad = deg_to_rad(35.0);
  return s;
}

// Scenario whose asperities all sit below the engagement gate: no spine
// ever settles, so the grasp is dead on arrival.
GraspScenario untenable_scenario() {
  GraspScenario s = default_scenario();
  s.target.asperity.slope.min_rad = 0.0;
  s.target.asperity.slope.max_rad = deg_to_rad(1.0);
  s.spines.inclination_deg = 30.0;  // gate at 15 degrees
  return s;
}

// Scenario that must detach below the cap: weak latches slip early and a
// zero-probability re-latch window kills every slipped spine.
GraspScenario doomed_scenario() {
  GraspScenario s = default_scenario();
  s.current_a = 0.15;  // tether tension ~119 N, far below the window
  s.target.asperity.slope.min_rad = deg_to_rad(16.0);
  s.target.asperity.slope.max_rad = deg_to_rad(18.0);
  s.tuning.relatch.floor = 0.0;
  return s;
}

}  // namespace

TEST_SUITE("grasp_sim") {

TEST_CASE("the stock scenario is valid") {
  const GraspScenario s = default_scenario();
  CHECK_NOTHROW(s.validate());
  CHECK(s.chain.lengths_m == std::vector<double>(4, 0.03));
  CHECK(s.finger_azimuths_deg.size() == 4);
  CHECK(s.spines.spines_per_module == 4);
  CHECK(s.spines.inclination_deg == doctest::Approx(30.0));
  CHECK(s.target.nominal_diameter_m == doctest::Approx(0.27));
  CHECK(s.current_a == doctest::Approx(0.225));
  CHECK(s.seed == 1);
  CHECK(s.mode == ContactMode::kConsistentUnits);
}

TEST_CASE("scenario validation screens the envelope") {
  GraspScenario s = default_scenario();
  s.finger_azimuths_deg = {0.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = default_scenario();
  s.pull_angle_deg = 91.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = default_scenario();
  s.current_a = 0.56;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = default_scenario();
  s.standoff_m = -0.01;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = default_scenario();
  s.ramp_rate_n_per_s = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("tuning validation screens the knobs") {
  SimTuning t;
  CHECK_NOTHROW(t.validate());
  t.settle_fraction = 1.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = SimTuning{};
  t.opposition_boost = 0.9;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = SimTuning{};
  t.force_step_n = 0.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  t = SimTuning{};
  t.max_relatch_per_step = -1;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("simulation is bit-for-bit deterministic in the scenario") {
  GraspScenario s = default_scenario();
  s.seed = 3;
  const DetachmentTrace a = simulate_detachment(s);
  const DetachmentTrace b = simulate_detachment(s);
  CHECK(traces_identical(a, b));

  const DetachmentTrace c = simulate_detachment(doomed_scenario());
  const DetachmentTrace d = simulate_detachment(doomed_scenario());
  CHECK(traces_identical(c, d));
}

TEST_CASE("different seeds change the outcome") {
  GraspScenario s = default_scenario();
  s.seed = 1;
  const DetachmentTrace a = simulate_detachment(s);
  s.seed = 2;
  const DetachmentTrace b = simulate_detachment(s);
  CHECK_FALSE(traces_identical(a, b));
}

TEST_CASE("a grasp that cannot lose spines rides the ramp to the cap") {
  const GraspScenario s = unbreakable_scenario();
  const DetachmentTrace trace = simulate_detachment(s);
  CHECK_FALSE(trace.detached);
  CHECK(trace.max_force_n == 50.0);  // the ramp ends exactly at the cap
  CHECK(trace.samples.back().applied_force_n == 50.0);
  CHECK(trace.samples.size() == 501);  // start sample plus 500 balanced steps

  const SweepStats stats = monte_carlo(s, 4);
  CHECK(stats.mean_max_force_n == 50.0);
  CHECK(stats.std_max_force_n == 0.0);
  CHECK(stats.min_max_force_n == 50.0);
  CHECK(stats.max_max_force_n == 50.0);
  CHECK(stats.detach_fraction == 0.0);
}

TEST_CASE("asperities below the engagement gate leave the grasp stillborn") {
  const DetachmentTrace trace = simulate_detachment(untenable_scenario());
  CHECK(trace.detached);
  CHECK(trace.max_force_n == 0.0);
  CHECK_FALSE(trace.first_slip_force_n.has_value());
  CHECK(trace.samples.size() == 1);  // only the zero-force start sample

  const SweepStats stats = monte_carlo(untenable_scenario(), 3);
  CHECK(stats.mean_max_force_n == 0.0);
  CHECK(stats.std_max_force_n == 0.0);
  CHECK(stats.detach_fraction == 1.0);
  CHECK(stats.mean_first_slip_n == 0.0);
}

TEST_CASE("fatal re-latching detaches the grasp below the cap") {
  const GraspScenario s = doomed_scenario();
  const DetachmentTrace trace = simulate_detachment(s);
  CHECK(trace.detached);
  CHECK(trace.max_force_n < s.tuning.force_cap_n);
  REQUIRE(trace.first_slip_force_n.has_value());
  CHECK(*trace.first_slip_force_n <= trace.max_force_n);
  CHECK(trace.samples.size() >= 2);
}

TEST_CASE("balanced trace samples carry the distributed loads") {
  const DetachmentTrace trace = simulate_detachment(doomed_scenario());
  const GraspScenario s = doomed_scenario();
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const TraceSample& sample = trace.samples[i];
    CHECK(sample.time_s ==
          sample.applied_force_n / s.ramp_rate_n_per_s);
    double sum = 0.0;
    for (double f : sample.finger_load_n) {
      CHECK(f >= 0.0);
      sum += f;
    }
    CHECK(sum ==
          doctest::Approx(sample.applied_force_n).epsilon(1.0e-6));
    CHECK(sample.applied_force_n > trace.samples[i - 1].applied_force_n);
  }
  CHECK(trace.samples[0].applied_force_n == 0.0);
  CHECK(trace.samples[0].time_s == 0.0);
}

TEST_CASE("slip counters accumulate monotonically along the trace") {
  const DetachmentTrace trace = simulate_detachment(doomed_scenario());
  int prev = 0;
  int events_total = 0;
  for (const TraceSample& sample : trace.samples) {
    CHECK(sample.slip_count_cum >= prev);
    prev = sample.slip_count_cum;
    events_total += static_cast<int>(sample.slip_events.size());
  }
  CHECK(events_total > 0);
}

TEST_CASE("monte carlo aggregates over consecutive seeds") {
  GraspScenario s = doomed_scenario();
  s.seed = 10;
  const SweepStats stats = monte_carlo(s, 3);
  CHECK(stats.repetitions == 3);

  double mean = 0.0;
  double lo = 1.0e300;
  double hi = -1.0e300;
  int detached = 0;
  for (int r = 0; r < 3; ++r) {
    GraspScenario rep = s;
    rep.seed = 10 + r;
    const DetachmentTrace t = simulate_detachment(rep);
    mean += t.max_force_n;
    lo = std::min(lo, t.max_force_n);
    hi = std::max(hi, t.max_force_n);
    if (t.detached) {
      ++detached;
    }
  }
  mean /= 3.0;
  CHECK(stats.mean_max_force_n == mean);
  CHECK(stats.min_max_force_n == lo);
  CHECK(stats.max_max_force_n == hi);
  CHECK(stats.detach_fraction == doctest::Approx(detached / 3.0));
  CHECK(stats.min_max_force_n <= stats.mean_max_force_n);
  CHECK(stats.mean_max_force_n <= stats.max_max_force_n);
}

TEST_CASE("a single repetition has zero spread") {
  const SweepStats stats = monte_carlo(default_scenario(), 1);
  CHECK(stats.std_max_force_n == 0.0);
  CHECK(stats.min_max_force_n == stats.mean_max_force_n);
  CHECK_THROWS_AS(monte_carlo(default_scenario(), 0), std::domain_error);
}

TEST_CASE("required grip force spreads the hang over the stance legs") {
  CHECK(required_grip_force(20.0, 1.62, 3) ==
        doctest::Approx(10.8).epsilon(1.0e-12));
  CHECK(required_grip_force(20.0, 3.71, 3) ==
        doctest::Approx(24.733333333333334).epsilon(1.0e-12));
  CHECK(required_grip_force(10.0, 9.81, 2) == doctest::Approx(49.05));
  CHECK(required_grip_force(0.0, 9.81, 3) == 0.0);
  CHECK_THROWS_AS(required_grip_force(20.0, 1.62, 0), std::domain_error);
  CHECK_THROWS_AS(required_grip_force(-1.0, 1.62, 3), std::domain_error);
  CHECK_THROWS_AS(required_grip_force(20.0, -1.0, 3), std::domain_error);
}

TEST_CASE("current response reuses the canonical sweep seeding") {
  GraspScenario base = default_scenario();
  base.tuning.force_cap_n = 30.0;  // keep the runs short
  RelatchWindow window;
  const std::vector<double> grid{0.2, 0.225};
  const int reps = 2;
  const std::vector<double> curve = current_response(base, window, grid, reps);
  REQUIRE(curve.size() == 2);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    GraspScenario cell = base;
    cell.tuning.relatch = window;
    cell.current_a = grid[c];
    cell.seed = base.seed + c * static_cast<std::uint64_t>(reps);
    CHECK(curve[c] == monte_carlo(cell, reps).mean_max_force_n);
  }
}

TEST_CASE("calibration returns the candidate window and its curve") {
  GraspScenario base = default_scenario();
  base.tuning.force_cap_n = 30.0;
  CalibrationBand band;
  band.best_currents_a = {0.225};
  band.current_grid_a = {0.2, 0.225};
  RelatchWindow cand;
  cand.low_n = 195.0;
  cand.high_n = 240.0;
  const std::vector<RelatchWindow> candidates{cand};
  const CalibrationResult result =
      calibrate_relatch(band, base, 2, &candidates);
  CHECK(result.window.low_n == 195.0);
  CHECK(result.window.high_n == 240.0);
  CHECK(result.current_grid_a == band.current_grid_a);
  CHECK(result.mean_max_force_n ==
        current_response(base, cand, band.current_grid_a, 2));
  // Convergence must agree with the returned curve's own peak.
  const bool peak_at_band =
      result.mean_max_force_n[1] > result.mean_max_force_n[0];
  CHECK(result.converged == peak_at_band);
}

TEST_CASE("calibration rejects empty grids and candidate lists") {
  CalibrationBand empty_grid;
  empty_grid.current_grid_a.clear();
  CHECK_THROWS_AS(calibrate_relatch(empty_grid, default_scenario(), 1),
                  std::invalid_argument);
  CalibrationBand band;
  const std::vector<RelatchWindow> none;
  CHECK_THROWS_AS(calibrate_relatch(band, default_scenario(), 1, &none),
                  std::invalid_argument);
}

}  // TEST_SUITE
