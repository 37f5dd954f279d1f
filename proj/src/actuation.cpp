// Drive train implementation.

#include "gripsim/actuation.hpp"

#include "gripsim/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gripsim {

void ActuatorModel::validate() const {
  if (!(anchor_high_current_a > anchor_low_current_a) ||
      anchor_low_current_a < 0.0) {
    throw std::invalid_argument(
        "actuator model: need 0 <= low anchor current < high anchor current");
  }
  if (!(anchor_high_torque_nm > anchor_low_torque_nm) ||
      anchor_low_torque_nm <= 0.0) {
    throw std::invalid_argument(
        "actuator model: need 0 < low anchor torque < high anchor torque");
  }
  if (!(ballscrew_pitch_m > 0.0)) {
    throw std::invalid_argument("actuator model: screw pitch must be > 0");
  }
  if (!(efficiency > 0.0) || efficiency > 1.0) {
    throw std::invalid_argument("actuator model: efficiency must be in (0, 1]");
  }
  if (!(desync_stiffness_n_per_m > 0.0)) {
    throw std::invalid_argument(
        "actuator model: desync spring stiffness must be > 0");
  }
  if (!(max_plate_travel_m > 0.0)) {
    throw std::invalid_argument("actuator model: travel limit must be > 0");
  }
}

double current_to_torque(const ActuatorModel& model, double current_a) {
  if (current_a < 0.0) {
    throw std::domain_error("current_to_torque: current must be >= 0");
  }
  if (current_a > 2.0 * model.anchor_high_current_a) {
    throw std::domain_error(
        "current_to_torque: current beyond twice the upper anchor");
  }
  // The anchors are measured points; reproduce them exactly rather than
  // through the interpolation arithmetic.
  if (current_a == model.anchor_low_current_a) {
    return model.anchor_low_torque_nm;
  }
  if (current_a == model.anchor_high_current_a) {
    return model.anchor_high_torque_nm;
  }
  const double slope = (model.anchor_high_torque_nm - model.anchor_low_torque_nm) /
                       (model.anchor_high_current_a - model.anchor_low_current_a);
  const double torque =
      model.anchor_low_torque_nm + slope * (current_a - model.anchor_low_current_a);
  return torque > 0.0 ? torque : 0.0;
}

double plate_force(const ActuatorModel& model, double motor_torque_nm) {
  if (motor_torque_nm < 0.0) {
    throw std::domain_error("plate_force: torque must be >= 0");
  }
  return 2.0 * kPi * model.efficiency * motor_torque_nm / model.ballscrew_pitch_m;
}

double tether_tension(const ActuatorModel& model, double current_a,
                      int finger_count) {
  if (finger_count < 1) {
    throw std::domain_error("tether_tension: need at least one finger");
  }
  return plate_force(model, current_to_torque(model, current_a)) / finger_count;
}

double desync_tension(double spring_stiffness_n_per_m, double plate_travel_m,
                      double finger_travel_m) {
  if (!(spring_stiffness_n_per_m > 0.0)) {
    throw std::domain_error("desync_tension: spring stiffness must be > 0");
  }
  if (finger_travel_m < 0.0 || finger_travel_m > plate_travel_m) {
    throw std::invalid_argument(
        "desync_tension: need 0 <= finger travel <= plate travel");
  }
  return spring_stiffness_n_per_m * (plate_travel_m - finger_travel_m);
}

ClosureState close_to_equilibrium(const std::vector<WrapState>& fingers,
                                  const PhalanxChain& chain,
                                  const ActuatorModel& model,
                                  double current_a) {
  model.validate();
  chain.validate();
  if (fingers.empty()) {
    throw std::domain_error("close_to_equilibrium: need at least one finger");
  }
  // Take-up at which each finger blocks: tendon length wound over the
  // pulleys to reach the wrapped pose.
  std::vector<double> blocked_at_m;
  blocked_at_m.reserve(fingers.size());
  for (const WrapState& w : fingers) {
    const double total_flexion =
        std::accumulate(w.joint_angles_rad.begin(), w.joint_angles_rad.end(), 0.0);
    blocked_at_m.push_back(chain.pulley_radius_m * total_flexion);
  }

  const double motor_torque = current_to_torque(model, current_a);
  const double target_n = plate_force(model, motor_torque);
  const double k = model.desync_stiffness_n_per_m;
  auto total_tension = [&](double travel) {
    double sum = 0.0;
    for (double b : blocked_at_m) {
      sum += desync_tension(k, travel, std::min(b, travel));
    }
    return sum;
  };
  constexpr double kTol_n = 1.0e-6;

  double travel = 0.0;
  bool at_limit = false;
  if (target_n <= kTol_n) {
    travel = 0.0;  // zero demand: smallest balancing travel is none
  } else if (total_tension(model.max_plate_travel_m) < target_n) {
    travel = model.max_plate_travel_m;
    at_limit = true;
  } else {
    // Total tension is continuous, nondecreasing, and strictly increasing
    // wherever positive, so the balancing travel is unique.
    double lo = 0.0;
    double hi = model.max_plate_travel_m;
    for (int iter = 0; iter < 200 && hi - lo > 1.0e-15; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (total_tension(mid) < target_n) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    travel = hi;
    if (std::abs(total_tension(travel) - target_n) > kTol_n) {
      throw std::runtime_error(
          "close_to_equilibrium: bisection failed to balance the plate force");
    }
  }

  ClosureState state;
  state.plate_travel_m = travel;
  state.motor_torque_nm = motor_torque;
  state.locked = true;
  state.hit_travel_limit = at_limit;
  state.finger_travel_m.reserve(fingers.size());
  state.tether_tension_n.reserve(fingers.size());
  for (double b : blocked_at_m) {
    const double finger_travel = std::min(b, travel);
    state.finger_travel_m.push_back(finger_travel);
    state.tether_tension_n.push_back(desync_tension(k, travel, finger_travel));
  }
  return state;
}

bool holds_without_power(const ClosureState& state) {
  if (state.locked) {
    return true;
  }
  return std::all_of(state.tether_tension_n.begin(),
                     state.tether_tension_n.end(),
                     [](double t) { return t == 0.0; });
}

ClosureState zero_torque_step(const ClosureState& state) {
  if (state.locked) {
    return state;
  }
  ClosureState released = state;
  released.plate_travel_m = 0.0;
  released.motor_torque_nm = 0.0;
  std::fill(released.finger_travel_m.begin(), released.finger_travel_m.end(),
            0.0);
  std::fill(released.tether_tension_n.begin(), released.tether_tension_n.end(),
            0.0);
  return released;
}

}  // namespace gripsim
