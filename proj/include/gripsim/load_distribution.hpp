// Splits the external pull across the fingers of a radially arranged
// gripper: minimum-sum-of-squares load shares subject to carrying the full
// force, resisting the lateral component of an off-axis pull, and never
// pushing. Detects pulls the finger arrangement cannot resist.

#pragma once

#include <vector>

namespace gripsim {

/// Per-finger load shares for one applied pull.
struct LoadDistribution {
  std::vector<double> loads_n;
  bool feasible = true;       // false when the arrangement cannot resist the pull
  int max_load_finger = 0;    // index of the most loaded finger
  double unresisted_n = 0.0;  // lateral demand left unmet when infeasible
};

/// Distributes `total_n` of pull across fingers at the given azimuths. The
/// pull direction is its angle from the gripper axis plus an azimuth; an
/// off-axis pull adds a lateral demand of
/// lateral_coupling * total * sin(pull_angle) opposite the pull azimuth,
/// which the in-plane components of the finger loads must sum to. Solves
///   min sum f_i^2
///   s.t. sum f_i = total, sum f_i u_i = demand, f_i >= 0
/// exactly (the optimal support is one of the finger subsets; all are
/// tried). `active` masks out detached fingers (null = all active). When no
/// subset satisfies the constraints the pull is flagged infeasible: the
/// whole load lands on the active finger best aligned with the demand and
/// `unresisted_n` reports the lateral shortfall.
LoadDistribution distribute_load(double total_n, double pull_angle_deg,
                                 const std::vector<double>& finger_azimuths_deg,
                                 double pull_azimuth_deg = 0.0,
                                 double lateral_coupling = 0.5,
                                 const std::vector<bool>* active = nullptr);

}  // namespace gripsim
