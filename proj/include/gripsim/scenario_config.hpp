// Scenario configuration files: strict JSON with unit-suffixed keys.
// Unknown keys are rejected and every violation in a file is reported in
// one pass, so a typo in a physical parameter cannot silently fall back to
// a default.

#pragma once

#include "gripsim/grasp_sim.hpp"

#include <string>
#include <vector>

namespace gripsim {

/// Sweep axes: the cross product of these lists defines the cells.
struct SweepAxes {
  std::vector<double> pull_angles_deg;
  std::vector<double> target_diameters_m;
  std::vector<SpineInterface> interfaces;
  std::vector<double> currents_a;
  int repetitions = 5;
};

/// Parsed configuration document: the base scenario plus optional sweep
/// axes (required only by the sweep and calibrate commands).
struct ScenarioConfig {
  GraspScenario scenario;
  bool has_sweep = false;
  SweepAxes sweep;
};

/// Parses a config document. Throws config_error carrying every violation
/// found (unknown keys, missing keys, wrong types, domain violations).
ScenarioConfig parse_config(const std::string& json_text);

/// Reads and parses a config file. Unreadable files throw config_error.
ScenarioConfig load_config(const std::string& path);

}  // namespace gripsim
