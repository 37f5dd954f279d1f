// Single-motor drive chain: current to torque through two calibration
// anchors, ball-screw plate force, per-finger desync-spring tensions,
// equilibrium closing against wrapped fingers, and the self-locking hold.

#pragma once

#include "gripsim/finger_mechanics.hpp"

#include <vector>

namespace gripsim {

/// Motor and ball-screw parameters. The current->torque map is linear
/// through two measured anchors and floored at zero torque.
struct ActuatorModel {
  double anchor_low_current_a = 0.15;
  double anchor_low_torque_nm = 0.084;
  double anchor_high_current_a = 0.275;
  double anchor_high_torque_nm = 0.179;
  double ballscrew_pitch_m = 0.001;
  double efficiency = 0.9;
  double desync_stiffness_n_per_m = 1000.0;
  double max_plate_travel_m = 0.05;

  void validate() const;
};

/// State of the pulling plate and tethers after closing.
struct ClosureState {
  double plate_travel_m = 0.0;
  std::vector<double> finger_travel_m;    // tendon take-up per finger
  std::vector<double> tether_tension_n;   // spring tension per finger
  double motor_torque_nm = 0.0;
  bool locked = false;                    // screw self-lock engaged
  bool hit_travel_limit = false;          // stopped at the stroke end, not at balance
};

/// Motor torque at a drive current: linear through the anchors, floored at
/// zero. Throws std::domain_error for negative current or current beyond
/// twice the upper anchor.
double current_to_torque(const ActuatorModel& model, double current_a);

/// Axial force the ball screw puts on the pulling plate:
/// 2 pi * efficiency * torque / pitch.
double plate_force(const ActuatorModel& model, double motor_torque_nm);

/// Tension in each of `finger_count` tethers when the plate force splits
/// evenly (all fingers blocked at the same take-up).
double tether_tension(const ActuatorModel& model, double current_a,
                      int finger_count);

/// Desync-spring tension of one finger: k * (plate travel - finger travel).
/// Throws std::invalid_argument when the finger travel exceeds the plate
/// travel or is negative (the spring cannot be compressed past free length).
double desync_tension(double spring_stiffness_n_per_m, double plate_travel_m,
                      double finger_travel_m);

/// Advances the plate until the spring tensions balance the screw force.
/// Each finger blocks once its wrap is complete; the take-up needed is the
/// tendon length wound by the wrap (pulley radius times total flexion).
/// Solved by bisection on plate travel (total tension is monotone in it),
/// force residual below 1e-6 N, smallest balancing travel. Travel saturates
/// at the stroke limit, which sets hit_travel_limit. The returned state is
/// locked: the screw cannot be back-driven.
ClosureState close_to_equilibrium(const std::vector<WrapState>& fingers,
                                  const PhalanxChain& chain,
                                  const ActuatorModel& model,
                                  double current_a);

/// True when the state holds with the motor unpowered: either the
/// self-locking screw is engaged or there is no tension to hold.
bool holds_without_power(const ClosureState& state);

/// Advance one step with zero motor torque. A locked screw holds the plate
/// exactly where it is, so the state (tensions included) is bit-for-bit
/// unchanged; an unlocked state releases to zero tension.
ClosureState zero_torque_step(const ClosureState& state);

}  // namespace gripsim
