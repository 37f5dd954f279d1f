// Acceptance gate: one pass/fail line per release criterion, nonzero exit
// if any fails. Criteria cover the pressure model, the friction model, the
// drive map, mission loads, the power-off hold, Monte Carlo trends, the
// re-latch calibration, and byte-stable CLI outputs.

#include "gripsim/commands.hpp"
#include "gripsim/common.hpp"
#include "gripsim/grasp_sim.hpp"
#include "gripsim/rng.hpp"
#include "gripsim/scenario_config.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace gripsim;
namespace fs = std::filesystem;

namespace {

bool rel_close(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) {
    return true;
  }
  return std::abs(a - b) <= tol * scale;
}

double suffix_moment_sum(const std::vector<double>& lengths, int j) {
  const int n = static_cast<int>(lengths.size());
  std::vector<double> suffix(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    suffix[i] = suffix[i + 1] + lengths[i];
  }
  double total = 0.0;
  for (int i = j; i < n; ++i) {
    total += lengths[i] * suffix[i];
  }
  return total;
}

// equal-length pressure ratios: tip-normalized 1/10, 1/6, 1/3, 1.
bool criterion_pressure_ratios() {
  PhalanxChain chain;
  chain.lengths_m = {0.03, 0.03, 0.03, 0.03};
  chain.pulley_radius_m = 0.005;
  const double tension = 100.0;
  const PressureProfile profile = pressure_profile(chain, tension);
  const double tau = 0.005 * tension;
  const double l2 = 0.03 * 0.03;
  const double expected[4] = {tau / (10.0 * l2), tau / (6.0 * l2),
                              tau / (3.0 * l2), tau / l2};
  for (int j = 0; j < 4; ++j) {
    if (!rel_close(profile.pressure_n_per_m[j], expected[j], 1.0e-12)) {
      return false;
    }
  }
  return true;
}

// closed form vs general profile for uniform chains of 1..10 phalanges.
bool criterion_formula_equivalence() {
  RngStream rng(101);
  for (int n = 1; n <= 10; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const double l = rng.uniform(0.01, 0.1);
      const double r = l * rng.uniform(0.05, 0.45);
      const double tension = rng.uniform(0.1, 500.0);
      PhalanxChain chain;
      chain.lengths_m.assign(n, l);
      chain.pulley_radius_m = r;
      const PressureProfile profile = pressure_profile(chain, tension);
      const double tau = r * tension;
      for (int j = 0; j < n; ++j) {
        if (!rel_close(profile.pressure_n_per_m[j],
                       equal_length_pressure(tau, l, n, j), 1.0e-12)) {
          return false;
        }
      }
    }
  }
  return true;
}

// pressure profile times an independent moment sum reproduces r*T at
// every joint of random mixed-length chains.
bool criterion_torque_reconstruction() {
  RngStream rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform01() * 8.0);
    PhalanxChain chain;
    chain.lengths_m.resize(n);
    double min_len = 1.0;
    for (double& l : chain.lengths_m) {
      l = rng.uniform(0.01, 0.08);
      min_len = std::min(min_len, l);
    }
    chain.pulley_radius_m = min_len * rng.uniform(0.05, 0.45);
    const double tension = rng.uniform(1.0, 500.0);
    const double tau = chain.pulley_radius_m * tension;
    const PressureProfile profile = pressure_profile(chain, tension);
    for (int j = 0; j < n; ++j) {
      const double rec =
          profile.pressure_n_per_m[j] * suffix_moment_sum(chain.lengths_m, j);
      if (!rel_close(rec, tau, 1.0e-9)) {
        return false;
      }
    }
  }
  return true;
}

// friction model: exact at flat asperities, divergent at self-locking
// ones, strictly increasing between.
bool criterion_friction_model() {
  RngStream rng(303);
  for (int i = 0; i < 50; ++i) {
    const double mu = rng.uniform(0.05, 3.0);
    if (effective_friction(mu, 0.0) != mu) {
      return false;
    }
  }
  const auto self_locks = [](double mu, double beta_deg) {
    try {
      effective_friction(mu, deg_to_rad(beta_deg));
      return false;
    } catch (const self_locking_error&) {
      return true;
    }
  };
  if (!self_locks(1.5, 40.0) || !self_locks(1.0, 50.0) ||
      !self_locks(0.5, 80.0)) {
    return false;
  }
  const double mu = 0.4;
  const double limit = std::atan(1.0 / mu);
  double prev = -1.0;
  for (int i = 0; i < 100; ++i) {
    const double val = effective_friction(mu, 0.99 * limit * i / 99.0);
    if (!(val > prev)) {
      return false;
    }
    prev = val;
  }
  return true;
}

// the two measured drive anchors are reproduced bit-for-bit.
bool criterion_drive_anchors() {
  const ActuatorModel model;
  return current_to_torque(model, 0.15) == 0.084 &&
         current_to_torque(model, 0.275) == 0.179;
}

// worst-case per-gripper loads for a 20 kg tripod hang.
bool criterion_mission_loads() {
  return std::abs(required_grip_force(20.0, 1.62, 3) - 10.8) <= 0.01 &&
         std::abs(required_grip_force(20.0, 3.71, 3) - 24.73) <= 0.01;
}

// zero-torque stepping never moves a closed (self-locked) drive.
bool criterion_power_off_hold() {
  PhalanxChain chain;
  chain.lengths_m = {0.03, 0.03, 0.03, 0.03};
  chain.pulley_radius_m = 0.005;
  chain.joint_limit_rad = kPi / 2.0;
  ActuatorModel model;
  model.desync_stiffness_n_per_m = 20000.0;
  RngStream rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const double diameter = rng.uniform(0.05, 0.6);
    const double current = rng.uniform(0.0, 0.55);
    const std::vector<WrapState> fingers(4, wrap_on_sphere(chain, diameter));
    const ClosureState state =
        close_to_equilibrium(fingers, chain, model, current);
    if (!state.locked || !holds_without_power(state)) {
      return false;
    }
    ClosureState stepped = state;
    for (int i = 0; i < 100; ++i) {
      stepped = zero_torque_step(stepped);
      if (stepped.plate_travel_m != state.plate_travel_m ||
          stepped.motor_torque_nm != state.motor_torque_nm ||
          stepped.locked != state.locked ||
          stepped.hit_travel_limit != state.hit_travel_limit ||
          stepped.finger_travel_m != state.finger_travel_m ||
          stepped.tether_tension_n != state.tether_tension_n) {
        return false;
      }
    }
  }
  return true;
}

// Monte Carlo trends: smaller targets hold more, steeper pulls at high
// angle hold more than mid angle, steeper spines beat shallow ones; every
// margin must clear the standard errors, inside a wall-clock budget.
bool criterion_trends(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  const int reps = 200;
  std::uint64_t next_seed = 1;
  const auto run = [&](double diameter, double angle, double incl) {
    GraspScenario s = default_scenario();
    s.target = make_sphere(diameter);
    s.pull_angle_deg = angle;
    s.spines.inclination_deg = incl;
    s.seed = next_seed;
    next_seed += reps;
    return monte_carlo(s, reps);
  };
  const SweepStats d_small = run(0.135, 0.0, 30.0);
  const SweepStats d_mid = run(0.27, 0.0, 30.0);
  const SweepStats d_large = run(0.405, 0.0, 30.0);
  const SweepStats a60 = run(0.27, 60.0, 30.0);
  const SweepStats a90 = run(0.27, 90.0, 30.0);
  const SweepStats shallow = run(0.27, 0.0, 15.0);
  const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  const auto sem = [&](const SweepStats& s) {
    return s.std_max_force_n / std::sqrt(static_cast<double>(reps));
  };
  const auto above = [&](const SweepStats& hi, const SweepStats& lo) {
    return hi.mean_max_force_n - lo.mean_max_force_n > sem(hi) + sem(lo);
  };
  std::ostringstream info;
  info << "means " << d_small.mean_max_force_n << "/" << d_mid.mean_max_force_n
       << "/" << d_large.mean_max_force_n << " N by diameter, "
       << a90.mean_max_force_n << ">" << a60.mean_max_force_n
       << " N by angle, " << d_mid.mean_max_force_n << ">"
       << shallow.mean_max_force_n << " N by spine angle, " << elapsed << " s";
  detail = info.str();
  return above(d_small, d_mid) && above(d_mid, d_large) && above(a90, a60) &&
         above(d_mid, shallow) && elapsed < 120;
}

// calibration: the fitted window peaks at the design currents and the
// first slips at the peak current land in the usable onset band.
bool criterion_calibration(std::string& detail) {
  const CalibrationBand band;
  const GraspScenario base = default_scenario();
  const CalibrationResult result = calibrate_relatch(band, base, 25);
  std::size_t peak = 0;
  for (std::size_t j = 1; j < result.mean_max_force_n.size(); ++j) {
    if (result.mean_max_force_n[j] > result.mean_max_force_n[peak]) {
      peak = j;
    }
  }
  const double peak_current = result.current_grid_a[peak];
  const bool peak_in_band =
      std::abs(peak_current - 0.225) < 1.0e-9 ||
      std::abs(peak_current - 0.25) < 1.0e-9;

  GraspScenario probe = base;
  probe.tuning.relatch = result.window;
  probe.current_a = 0.25;
  std::vector<double> first_slips;
  for (int i = 0; i < 50; ++i) {
    probe.seed = 1 + static_cast<std::uint64_t>(i);
    const DetachmentTrace trace = simulate_detachment(probe);
    first_slips.push_back(trace.first_slip_force_n
                              ? *trace.first_slip_force_n
                              : std::numeric_limits<double>::infinity());
  }
  std::sort(first_slips.begin(), first_slips.end());
  const double median = 0.5 * (first_slips[24] + first_slips[25]);
  std::ostringstream info;
  info << "peak at " << peak_current << " A, median first slip " << median
       << " N";
  detail = info.str();
  return result.converged && peak_in_band && std::isfinite(median) &&
         median >= 15.0 && median <= 25.0;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// identical bytes from repeated runs and across worker counts.
bool criterion_reproducibility() {
  const fs::path root = fs::temp_directory_path() / "gripsim_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string baseline =
      std::string(GRIPSIM_CONFIG_DIR) + "/baseline.json";
  const std::string sweep = std::string(GRIPSIM_CONFIG_DIR) + "/sweep.json";

  CommandOptions detach;
  detach.config_path = baseline;
  detach.repetitions = 3;
  std::ostringstream sink;
  std::ostringstream err;
  detach.out_dir = (root / "detach_a").string();
  if (cmd_detach(detach, sink, err) != kExitOk) {
    return false;
  }
  detach.out_dir = (root / "detach_b").string();
  if (cmd_detach(detach, sink, err) != kExitOk) {
    return false;
  }
  for (const char* name : {"summary.csv", "trace_1.csv", "trace_2.csv",
                           "trace_3.csv"}) {
    const std::string a = slurp(root / "detach_a" / name);
    if (a.empty() || a != slurp(root / "detach_b" / name)) {
      return false;
    }
  }

  CommandOptions sweep_opts;
  sweep_opts.config_path = sweep;
  sweep_opts.repetitions = 2;
  sweep_opts.workers = 1;
  sweep_opts.out_dir = (root / "sweep_w1").string();
  if (cmd_sweep(sweep_opts, sink, err) != kExitOk) {
    return false;
  }
  sweep_opts.workers = 8;
  sweep_opts.out_dir = (root / "sweep_w8").string();
  if (cmd_sweep(sweep_opts, sink, err) != kExitOk) {
    return false;
  }
  sweep_opts.workers = 1;
  sweep_opts.out_dir = (root / "sweep_w1_again").string();
  if (cmd_sweep(sweep_opts, sink, err) != kExitOk) {
    return false;
  }
  const std::string w1 = slurp(root / "sweep_w1" / "cells.csv");
  return !w1.empty() && w1 == slurp(root / "sweep_w8" / "cells.csv") &&
         w1 == slurp(root / "sweep_w1_again" / "cells.csv");
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const char* label, bool ok,
                          const std::string& detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, label,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) {
      ++failures;
    }
  };

  report(1, "equal-length pressure ratios 1/10 : 1/6 : 1/3 : 1",
         criterion_pressure_ratios());
  report(2, "closed form matches the general profile for 1..10 phalanges",
         criterion_formula_equivalence());
  report(3, "pressure profile reconstructs r*T at every joint",
         criterion_torque_reconstruction());
  report(4, "effective friction: exact flat limit, self-locking, monotone",
         criterion_friction_model());
  report(5, "drive anchors reproduced exactly", criterion_drive_anchors());
  report(6, "mission loads for a 20 kg tripod hang on moon and mars",
         criterion_mission_loads());
  report(7, "self-locked drives ignore zero-torque steps bit-for-bit",
         criterion_power_off_hold());
  {
    std::string detail;
    const bool ok = criterion_trends(detail);
    report(8, "Monte Carlo trends clear their standard errors", ok, detail);
  }
  {
    std::string detail;
    const bool ok = criterion_calibration(detail);
    report(9, "re-latch calibration peaks at the design currents", ok, detail);
  }
  report(10, "byte-identical outputs across reruns and worker counts",
         criterion_reproducibility());

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
