// Quasi-static detachment engine: wraps fingers on a target, closes the
// drive to equilibrium, ramps an external pull at a commanded angle,
// distributes load across fingers and spines, fires slip/re-latch events,
// and records traces and maxima. Adds Monte Carlo statistics, mission load
// estimation, and re-latch window calibration.

#pragma once

#include "gripsim/actuation.hpp"
#include "gripsim/finger_mechanics.hpp"
#include "gripsim/load_distribution.hpp"
#include "gripsim/spine_contact.hpp"
#include "gripsim/target_model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gripsim {

/// How the per-spine normal term of the holding-force law is formed.
/// kConsistentUnits converts line pressure to a per-spine force (the
/// default); kLiteral feeds the raw line-pressure value r*T/L_j in, keeping
/// the holding-force expression executable exactly as written even though
/// its units do not close.
enum class ContactMode { kConsistentUnits, kLiteral };

/// Engine tuning: the knobs behind settlement, re-latching, opposition
/// contacts, and the force ramp. All are calibration inputs, not measured
/// values.
struct SimTuning {
  // A spine settles during closure only onto an asperity whose holding
  // capacity is at least this fraction of its share of the tether tension;
  // weaker latches are shaken off and re-drawn. Sets the first-slip onset
  // at roughly n_fingers * settle_fraction * tether tension.
  double settle_fraction = 0.02;
  int settle_attempts = 8;  // draws a spine gets to find a latch at closure
  // Capacity multiplier for contacts whose outward normal opposes the pull
  // (wrap past the target's widest point): such contacts act as hooks.
  double opposition_boost = 2.5;
  // Fraction of the lateral pull component the finger loads must resist.
  double lateral_coupling = 0.5;
  RelatchWindow relatch;
  int max_relatch_per_step = 3;  // re-latch attempts per spine per force step
  double force_step_n = 0.1;
  double force_cap_n = 200.0;  // ramp stops here; reaching it is not detachment

  void validate() const;
};

/// One full simulated pull test.
struct GraspScenario {
  PhalanxChain chain;
  std::vector<double> finger_azimuths_deg = {0.0, 90.0, 180.0, 270.0};
  SpineInterface spines;
  TargetSurface target;
  ActuatorModel actuator;
  double pull_angle_deg = 0.0;    // 0 = along gripper axis, 90 = tangential
  double pull_azimuth_deg = 0.0;  // which side a tilted pull leans toward
  double current_a = 0.225;
  double ramp_rate_n_per_s = 10.0;
  double standoff_m = 0.0;  // finger length spent before first contact
  std::uint64_t seed = 1;
  ContactMode mode = ContactMode::kConsistentUnits;
  SimTuning tuning;

  void validate() const;
};

/// Scenario with the shipped default calibration: four 30 mm phalanges,
/// four fingers, quad 30 degree spines, the mid-size sphere target, 0.225 A
/// drive, axial pull.
GraspScenario default_scenario();

/// One spine slip, possibly recovered by a re-latch.
struct SlipEvent {
  double force_n = 0.0;
  int finger = 0;
  int phalanx = 0;  // 1-based, base to tip
  int spine = 0;    // index within the phalanx module
  bool relatched = false;
};

/// Trace sample at one force step.
struct TraceSample {
  double time_s = 0.0;
  double applied_force_n = 0.0;
  std::vector<double> finger_load_n;
  std::vector<SlipEvent> slip_events;  // events fired during this step
  int slip_count_cum = 0;
};

/// Full record of one simulated pull test.
struct DetachmentTrace {
  std::vector<TraceSample> samples;
  double max_force_n = 0.0;  // largest force the grasp balanced
  std::optional<double> first_slip_force_n;
  bool detached = false;  // false = ramp reached the force cap
};

/// Per-cell Monte Carlo aggregate.
struct SweepStats {
  int repetitions = 0;
  double mean_max_force_n = 0.0;
  double std_max_force_n = 0.0;  // population standard deviation
  double min_max_force_n = 0.0;
  double max_max_force_n = 0.0;
  double mean_first_slip_n = 0.0;  // over repetitions that slipped
  double detach_fraction = 0.0;
};

/// Runs one pull test. Deterministic given the scenario (seed included).
DetachmentTrace simulate_detachment(const GraspScenario& scenario);

/// Runs `repetitions` pull tests with seeds scenario.seed + 0..reps-1 and
/// aggregates max-force statistics.
SweepStats monte_carlo(const GraspScenario& scenario, int repetitions);

/// Worst-case per-gripper load for a climbing robot: mass * gravity spread
/// over the stance legs (ceiling hang, tripod gait -> 3). Zero stance legs
/// throws std::domain_error.
double required_grip_force(double mass_kg, double gravity_mps2, int stance_legs);

/// Target band for the re-latch calibration: the drive currents the
/// response curve should peak at, and the grid it is evaluated over.
struct CalibrationBand {
  std::vector<double> best_currents_a = {0.225, 0.25};
  std::vector<double> current_grid_a = {0.15,  0.175, 0.2,
                                        0.225, 0.25,  0.275};
};

/// Result of the re-latch window search.
struct CalibrationResult {
  RelatchWindow window;
  bool converged = false;  // peak landed inside the band
  std::vector<double> current_grid_a;
  std::vector<double> mean_max_force_n;  // response curve for `window`
};

/// Evaluates the mean max-force response over the current grid for one
/// window candidate. The cell for grid index c uses seed
/// base.seed + c * repetitions, so a current-axis sweep with the same seed
/// reproduces the curve exactly.
std::vector<double> current_response(const GraspScenario& base,
                                     const RelatchWindow& window,
                                     const std::vector<double>& current_grid_a,
                                     int repetitions);

/// Grid-searches re-latch window parameters so the current response peaks
/// inside the band. Returns the best-scoring window (peak-vs-off-band
/// separation) and its curve; `converged` is false when no candidate peaks
/// in the band, in which case the best found is still returned. A custom
/// candidate list replaces the built-in search grid when given.
CalibrationResult calibrate_relatch(
    const CalibrationBand& band, const GraspScenario& base_scenario,
    int repetitions, const std::vector<RelatchWindow>* candidates = nullptr);

}  // namespace gripsim
