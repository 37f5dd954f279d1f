// Strict config parsing implementation.

#include "gripsim/scenario_config.hpp"

#include "gripsim/common.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

namespace gripsim {
namespace {

using nlohmann::json;

// Accumulates violations while walking the document, so one parse reports
// everything wrong with the file.
class Checker {
 public:
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }

  void fail(const std::string& path, const std::string& message) {
    violations.push_back(path + ": " + message);
  }

  // Rejects keys outside the allowed set.
  void check_unknown(const json& obj, const std::string& path,
                     std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = false;
      for (const char* k : allowed) {
        if (it.key() == k) {
          known = true;
          break;
        }
      }
      if (!known) {
        fail(path + "." + it.key(), "unknown key");
      }
    }
  }

  const json* require_object(const json& obj, const std::string& path,
                             const char* key) {
    if (!obj.contains(key)) {
      fail(path + "." + key, "missing required object");
      return nullptr;
    }
    if (!obj[key].is_object()) {
      fail(path + "." + key, "must be an object");
      return nullptr;
    }
    return &obj[key];
  }

  double require_number(const json& obj, const std::string& path,
                        const char* key, double fallback = 0.0) {
    if (!obj.contains(key)) {
      fail(path + "." + key, "missing required number");
      return fallback;
    }
    if (!obj[key].is_number()) {
      fail(path + "." + key, "must be a number");
      return fallback;
    }
    return obj[key].get<double>();
  }

  double optional_number(const json& obj, const std::string& path,
                         const char* key, double fallback) {
    if (!obj.contains(key)) {
      return fallback;
    }
    if (!obj[key].is_number()) {
      fail(path + "." + key, "must be a number");
      return fallback;
    }
    return obj[key].get<double>();
  }

  int require_int(const json& obj, const std::string& path, const char* key,
                  int fallback = 0) {
    if (!obj.contains(key)) {
      fail(path + "." + key, "missing required integer");
      return fallback;
    }
    if (!obj[key].is_number_integer()) {
      fail(path + "." + key, "must be an integer");
      return fallback;
    }
    return obj[key].get<int>();
  }

  int optional_int(const json& obj, const std::string& path, const char* key,
                   int fallback) {
    if (!obj.contains(key)) {
      return fallback;
    }
    if (!obj[key].is_number_integer()) {
      fail(path + "." + key, "must be an integer");
      return fallback;
    }
    return obj[key].get<int>();
  }

  std::uint64_t require_seed(const json& obj, const std::string& path,
                             const char* key) {
    if (!obj.contains(key)) {
      fail(path + "." + key, "missing required integer");
      return 0;
    }
    if (!obj[key].is_number_integer() || obj[key].get<long long>() < 0) {
      fail(path + "." + key, "must be a non-negative integer");
      return 0;
    }
    return obj[key].get<std::uint64_t>();
  }

  std::string require_string(const json& obj, const std::string& path,
                             const char* key) {
    if (!obj.contains(key)) {
      fail(path + "." + key, "missing required string");
      return {};
    }
    if (!obj[key].is_string()) {
      fail(path + "." + key, "must be a string");
      return {};
    }
    return obj[key].get<std::string>();
  }

  std::vector<double> require_number_list(const json& obj,
                                          const std::string& path,
                                          const char* key) {
    std::vector<double> out;
    if (!obj.contains(key)) {
      fail(path + "." + key, "missing required list of numbers");
      return out;
    }
    if (!obj[key].is_array()) {
      fail(path + "." + key, "must be a list of numbers");
      return out;
    }
    for (const auto& v : obj[key]) {
      if (!v.is_number()) {
        fail(path + "." + key, "entries must be numbers");
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }
};

SlopeDistribution parse_slope(Checker& c, const json& obj,
                              const std::string& path) {
  SlopeDistribution slope;
  const std::string kind = c.require_string(obj, path, "kind");
  if (kind == "uniform") {
    c.check_unknown(obj, path, {"kind", "min_deg", "max_deg"});
    slope.kind = SlopeDistribution::Kind::kUniform;
    slope.min_rad = deg_to_rad(c.require_number(obj, path, "min_deg"));
    slope.max_rad = deg_to_rad(c.require_number(obj, path, "max_deg"));
  } else if (kind == "truncated_normal") {
    c.check_unknown(obj, path, {"kind", "mean_deg", "sd_deg", "min_deg", "max_deg"});
    slope.kind = SlopeDistribution::Kind::kTruncatedNormal;
    slope.mean_rad = deg_to_rad(c.require_number(obj, path, "mean_deg"));
    slope.sd_rad = deg_to_rad(c.require_number(obj, path, "sd_deg"));
    slope.min_rad = deg_to_rad(c.require_number(obj, path, "min_deg"));
    slope.max_rad = deg_to_rad(c.require_number(obj, path, "max_deg"));
  } else if (!kind.empty()) {
    c.fail(path + ".kind", "must be \"uniform\" or \"truncated_normal\"");
  }
  return slope;
}

AsperityModel parse_asperity(Checker& c, const json& obj,
                             const std::string& path) {
  AsperityModel a;
  c.check_unknown(obj, path, {"base_friction", "slope"});
  a.base_friction = c.require_number(obj, path, "base_friction", a.base_friction);
  if (const json* slope = c.require_object(obj, path, "slope")) {
    a.slope = parse_slope(c, *slope, path + ".slope");
  }
  return a;
}

TargetSurface parse_target(Checker& c, const json& obj,
                           const std::string& path) {
  TargetSurface target;
  const std::string kind = c.require_string(obj, path, "kind");
  if (kind == "sphere") {
    c.check_unknown(obj, path, {"kind", "diameter_m", "asperity"});
    const double diameter = c.require_number(obj, path, "diameter_m", 0.27);
    if (c.ok()) {
      target = make_sphere(diameter);
    }
  } else if (kind == "rock") {
    c.check_unknown(obj, path,
                    {"kind", "diameter_m", "roughness_amplitude_m",
                     "correlation_scale_m", "rock_seed", "asperity"});
    const double diameter = c.require_number(obj, path, "diameter_m", 0.27);
    const double amplitude =
        c.require_number(obj, path, "roughness_amplitude_m", 0.0);
    const double scale = c.require_number(obj, path, "correlation_scale_m", 0.05);
    const std::uint64_t seed = c.require_seed(obj, path, "rock_seed");
    if (c.ok()) {
      target = make_rock(seed, diameter, amplitude, scale);
    }
  } else if (!kind.empty()) {
    c.fail(path + ".kind", "must be \"sphere\" or \"rock\"");
  }
  if (obj.contains("asperity")) {
    if (const json* asp = c.require_object(obj, path, "asperity")) {
      target.asperity = parse_asperity(c, *asp, path + ".asperity");
    }
  }
  return target;
}

SpineInterface parse_interface(Checker& c, const json& obj,
                               const std::string& path) {
  SpineInterface s;
  c.check_unknown(obj, path, {"spines_per_module", "inclination_deg"});
  s.spines_per_module =
      c.require_int(obj, path, "spines_per_module", s.spines_per_module);
  s.inclination_deg =
      c.require_number(obj, path, "inclination_deg", s.inclination_deg);
  return s;
}

GraspScenario parse_scenario(Checker& c, const json& obj,
                             const std::string& path) {
  GraspScenario s;
  c.check_unknown(obj, path,
                  {"chain", "finger_azimuths_deg", "spines", "target",
                   "actuator", "pull_angle_deg", "pull_azimuth_deg",
                   "current_a", "ramp_rate_n_per_s", "standoff_m", "seed",
                   "mode", "tuning"});

  if (const json* chain = c.require_object(obj, path, "chain")) {
    const std::string p = path + ".chain";
    c.check_unknown(*chain, p,
                    {"lengths_m", "pulley_radius_m",
                     "opening_spring_stiffness_nm_per_rad", "joint_limit_deg"});
    s.chain.lengths_m = c.require_number_list(*chain, p, "lengths_m");
    s.chain.pulley_radius_m = c.require_number(*chain, p, "pulley_radius_m",
                                               s.chain.pulley_radius_m);
    s.chain.opening_spring_stiffness_nm_per_rad =
        c.require_number(*chain, p, "opening_spring_stiffness_nm_per_rad",
                         s.chain.opening_spring_stiffness_nm_per_rad);
    s.chain.joint_limit_rad =
        deg_to_rad(c.require_number(*chain, p, "joint_limit_deg", 90.0));
  }

  if (obj.contains("finger_azimuths_deg")) {
    s.finger_azimuths_deg =
        c.require_number_list(obj, path, "finger_azimuths_deg");
  }

  if (const json* spines = c.require_object(obj, path, "spines")) {
    s.spines = parse_interface(c, *spines, path + ".spines");
  }
  if (const json* target = c.require_object(obj, path, "target")) {
    s.target = parse_target(c, *target, path + ".target");
  }
  if (const json* act = c.require_object(obj, path, "actuator")) {
    const std::string p = path + ".actuator";
    c.check_unknown(*act, p,
                    {"anchor_low_current_a", "anchor_low_torque_nm",
                     "anchor_high_current_a", "anchor_high_torque_nm",
                     "ballscrew_pitch_m", "efficiency",
                     "desync_stiffness_n_per_m", "max_plate_travel_m"});
    ActuatorModel& a = s.actuator;
    a.anchor_low_current_a =
        c.require_number(*act, p, "anchor_low_current_a", a.anchor_low_current_a);
    a.anchor_low_torque_nm =
        c.require_number(*act, p, "anchor_low_torque_nm", a.anchor_low_torque_nm);
    a.anchor_high_current_a = c.require_number(*act, p, "anchor_high_current_a",
                                               a.anchor_high_current_a);
    a.anchor_high_torque_nm = c.require_number(*act, p, "anchor_high_torque_nm",
                                               a.anchor_high_torque_nm);
    a.ballscrew_pitch_m =
        c.require_number(*act, p, "ballscrew_pitch_m", a.ballscrew_pitch_m);
    a.efficiency = c.require_number(*act, p, "efficiency", a.efficiency);
    a.desync_stiffness_n_per_m = c.require_number(
        *act, p, "desync_stiffness_n_per_m", a.desync_stiffness_n_per_m);
    a.max_plate_travel_m =
        c.require_number(*act, p, "max_plate_travel_m", a.max_plate_travel_m);
  }

  s.pull_angle_deg = c.require_number(obj, path, "pull_angle_deg", 0.0);
  s.pull_azimuth_deg = c.optional_number(obj, path, "pull_azimuth_deg", 0.0);
  s.current_a = c.require_number(obj, path, "current_a", s.current_a);
  s.ramp_rate_n_per_s =
      c.require_number(obj, path, "ramp_rate_n_per_s", s.ramp_rate_n_per_s);
  s.standoff_m = c.optional_number(obj, path, "standoff_m", 0.0);
  s.seed = c.require_seed(obj, path, "seed");

  if (obj.contains("mode")) {
    const std::string mode = c.require_string(obj, path, "mode");
    if (mode == "consistent") {
      s.mode = ContactMode::kConsistentUnits;
    } else if (mode == "literal") {
      s.mode = ContactMode::kLiteral;
    } else if (!mode.empty()) {
      c.fail(path + ".mode", "must be \"consistent\" or \"literal\"");
    }
  }

  if (obj.contains("tuning")) {
    if (const json* tun = c.require_object(obj, path, "tuning")) {
      const std::string p = path + ".tuning";
      c.check_unknown(*tun, p,
                      {"settle_fraction", "settle_attempts", "opposition_boost",
                       "lateral_coupling", "relatch_low_n", "relatch_high_n",
                       "relatch_rolloff_n", "relatch_floor",
                       "max_relatch_per_step", "force_step_n", "force_cap_n"});
      SimTuning& t = s.tuning;
      t.settle_fraction =
          c.optional_number(*tun, p, "settle_fraction", t.settle_fraction);
      t.settle_attempts =
          c.optional_int(*tun, p, "settle_attempts", t.settle_attempts);
      t.opposition_boost =
          c.optional_number(*tun, p, "opposition_boost", t.opposition_boost);
      t.lateral_coupling =
          c.optional_number(*tun, p, "lateral_coupling", t.lateral_coupling);
      t.relatch.low_n = c.optional_number(*tun, p, "relatch_low_n", t.relatch.low_n);
      t.relatch.high_n =
          c.optional_number(*tun, p, "relatch_high_n", t.relatch.high_n);
      t.relatch.rolloff_n =
          c.optional_number(*tun, p, "relatch_rolloff_n", t.relatch.rolloff_n);
      t.relatch.floor = c.optional_number(*tun, p, "relatch_floor", t.relatch.floor);
      t.max_relatch_per_step =
          c.optional_int(*tun, p, "max_relatch_per_step", t.max_relatch_per_step);
      t.force_step_n = c.optional_number(*tun, p, "force_step_n", t.force_step_n);
      t.force_cap_n = c.optional_number(*tun, p, "force_cap_n", t.force_cap_n);
    }
  }
  return s;
}

SweepAxes parse_sweep(Checker& c, const json& obj, const std::string& path) {
  SweepAxes axes;
  c.check_unknown(obj, path,
                  {"pull_angles_deg", "target_diameters_m", "interfaces",
                   "currents_a", "repetitions"});
  axes.pull_angles_deg = c.require_number_list(obj, path, "pull_angles_deg");
  axes.target_diameters_m =
      c.require_number_list(obj, path, "target_diameters_m");
  axes.currents_a = c.require_number_list(obj, path, "currents_a");
  axes.repetitions = c.require_int(obj, path, "repetitions", 5);
  if (!obj.contains("interfaces")) {
    c.fail(path + ".interfaces", "missing required list");
  } else if (!obj["interfaces"].is_array()) {
    c.fail(path + ".interfaces", "must be a list of spine interfaces");
  } else {
    int idx = 0;
    for (const auto& entry : obj["interfaces"]) {
      const std::string p = path + ".interfaces[" + std::to_string(idx++) + "]";
      if (!entry.is_object()) {
        c.fail(p, "must be an object");
        continue;
      }
      axes.interfaces.push_back(parse_interface(c, entry, p));
    }
  }
  if (axes.repetitions < 1) {
    c.fail(path + ".repetitions", "must be >= 1");
  }
  if (c.ok()) {
    if (axes.pull_angles_deg.empty() || axes.target_diameters_m.empty() ||
        axes.currents_a.empty() || axes.interfaces.empty()) {
      c.fail(path, "sweep axes must be non-empty");
    }
  }
  return axes;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error({std::string("not valid JSON: ") + e.what()});
  }
  Checker c;
  ScenarioConfig config;
  if (!doc.is_object()) {
    throw config_error({"top level must be an object"});
  }
  c.check_unknown(doc, "$", {"scenario", "sweep"});
  if (const json* scenario = c.require_object(doc, "$", "scenario")) {
    config.scenario = parse_scenario(c, *scenario, "$.scenario");
  }
  if (doc.contains("sweep")) {
    if (const json* sweep = c.require_object(doc, "$", "sweep")) {
      config.has_sweep = true;
      config.sweep = parse_sweep(c, *sweep, "$.sweep");
    }
  }
  if (!c.ok()) {
    throw config_error(std::move(c.violations));
  }

  // Structure is sound; now run the domain validators component by
  // component so unrelated physical violations are all reported.
  auto probe = [&c](const char* where, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      c.fail(where, e.what());
    }
  };
  probe("$.scenario.chain", [&] { config.scenario.chain.validate(); });
  probe("$.scenario.spines", [&] { config.scenario.spines.validate(); });
  probe("$.scenario.target", [&] { config.scenario.target.validate(); });
  probe("$.scenario.actuator", [&] { config.scenario.actuator.validate(); });
  probe("$.scenario.tuning", [&] { config.scenario.tuning.validate(); });
  probe("$.scenario", [&] { config.scenario.validate(); });
  if (config.has_sweep) {
    for (std::size_t i = 0; i < config.sweep.interfaces.size(); ++i) {
      probe("$.sweep.interfaces", [&] { config.sweep.interfaces[i].validate(); });
    }
  }
  if (!c.ok()) {
    throw config_error(std::move(c.violations));
  }
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw config_error({"cannot read config file: " + path});
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace gripsim
