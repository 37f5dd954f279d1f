#include "gripsim/finger_mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gripsim {

void PhalanxChain::validate() const {
  if (lengths_m.empty()) throw std::invalid_argument("chain must have at least one phalanx");
  double min_len = lengths_m.front();
  for (double l : lengths_m) {
    if (!(l > 0.0)) throw std::invalid_argument("phalanx lengths must be > 0");
    min_len = std::min(min_len, l);
  }
  if (!(pulley_radius_m > 0.0)) throw std::invalid_argument("pulley radius must be > 0");
  if (!(pulley_radius_m < min_len / 2.0))
    throw std::invalid_argument("pulley radius must be smaller than half the shortest phalanx");
  if (!(opening_spring_stiffness_nm_per_rad >= 0.0))
    throw std::invalid_argument("opening spring stiffness must be >= 0");
  if (!(joint_limit_rad > 0.0)) throw std::invalid_argument("joint limit must be > 0");
}

double joint_torque(double pulley_radius_m, double tension_n) {
  if (!(pulley_radius_m > 0.0)) throw std::domain_error("pulley radius must be > 0");
  if (tension_n < 0.0) throw std::domain_error("tether tension cannot be negative");
  return pulley_radius_m * tension_n;
}

double moment_sum(std::span<const double> lengths_m, int j) {
  const int n = static_cast<int>(lengths_m.size());
  if (j < 0 || j > n) throw std::out_of_range("moment_sum index must lie in 0..n");
  if (j == n) return 0.0;
  // Double sum over the phalanges distal to joint j; lengths_m is 0-based so
  // the 1-based l_{n-m} of the definition reads lengths_m[n-m-1].
  double total = 0.0;
  for (int p = 0; p <= n - 1 - j; ++p) {
    double inner = 0.0;
    for (int m = 0; m <= p; ++m) inner += lengths_m[n - m - 1];
    total += inner * lengths_m[n - p - 1];
  }
  return total;
}

PressureProfile pressure_profile(const PhalanxChain& chain, double tension_n) {
  chain.validate();
  const double tau = joint_torque(chain.pulley_radius_m, tension_n);
  const int n = static_cast<int>(chain.phalanx_count());
  PressureProfile profile;
  profile.joint_torque_nm = tau;
  profile.pressure_n_per_m.resize(n);
  for (int j = 0; j < n; ++j)
    profile.pressure_n_per_m[j] = tau == 0.0 ? 0.0 : tau / moment_sum(chain.lengths_m, j);
  return profile;
}

double equal_length_pressure(double tau_nm, double phalanx_length_m, int n, int j) {
  if (!(phalanx_length_m > 0.0)) throw std::domain_error("phalanx length must be > 0");
  if (n < 1) throw std::domain_error("phalanx count must be >= 1");
  if (j < 0 || j > n - 1) throw std::out_of_range("pressure index must lie in 0..n-1");
  const double l2 = phalanx_length_m * phalanx_length_m;
  return 2.0 * tau_nm / (l2 * static_cast<double>(n - j) * static_cast<double>(n + 1 - j));
}

WrapState wrap_on_sphere(const PhalanxChain& chain, double sphere_diameter_m,
                         double standoff_m) {
  chain.validate();
  if (!(sphere_diameter_m > 0.0)) throw std::invalid_argument("sphere diameter must be > 0");
  if (standoff_m < 0.0) throw std::invalid_argument("standoff must be >= 0");

  const int n = static_cast<int>(chain.phalanx_count());
  const double radius = sphere_diameter_m / 2.0;
  WrapState state;
  state.joint_angles_rad.assign(n, 0.0);
  state.contact_flags.assign(n, false);
  state.contact_arcs_m.assign(n, 0.0);

  double gap = standoff_m;           // finger length still to spend before touching
  double arc = 0.0;                  // surface arc consumed by previous chords
  double prev_chord_angle = -1.0;    // <0 until the first contacting chord
  bool broken = false;               // a clamped/failed joint ends the wrap

  for (int i = 0; i < n; ++i) {
    double len = chain.lengths_m[i];
    if (gap > 0.0) {
      const double used = std::min(gap, len);
      gap -= used;
      len -= used;
      if (len <= 0.0) continue;  // phalanx fully spent bridging the standoff
    }
    if (broken || len > sphere_diameter_m) {
      broken = true;
      continue;
    }
    const double chord_angle = 2.0 * std::asin(len / sphere_diameter_m);
    // Joint i flexes by the mean of the adjacent chord angles; the base
    // joint sees only its own chord.
    const double flex = prev_chord_angle < 0.0 ? chord_angle
                                               : 0.5 * (prev_chord_angle + chord_angle);
    if (flex > chain.joint_limit_rad) {
      state.joint_angles_rad[i] = chain.joint_limit_rad;
      broken = true;
      continue;
    }
    state.joint_angles_rad[i] = flex;
    state.contact_flags[i] = true;
    state.contact_arcs_m[i] = arc + radius * chord_angle / 2.0;  // chord midpoint
    arc += radius * chord_angle;
    prev_chord_angle = chord_angle;
  }
  return state;
}

double per_spine_normal(double pressure_n_per_m, double phalanx_length_m,
                        int spines_in_contact) {
  if (spines_in_contact < 1)
    throw std::domain_error("per-spine normal force undefined without contacting spines");
  if (pressure_n_per_m < 0.0) throw std::domain_error("line pressure cannot be negative");
  return pressure_n_per_m * phalanx_length_m / static_cast<double>(spines_in_contact);
}

}  // namespace gripsim
