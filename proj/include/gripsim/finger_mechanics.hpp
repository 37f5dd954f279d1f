// Tendon-driven finger mechanics: joint torque from tether tension,
// per-phalanx line-pressure distribution, and conformal chord wrapping on
// convex targets.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gripsim {

/// Geometry of one tendon-driven finger. Phalanges are ordered base to tip
/// and flexed by a single tether routed over one pulley per joint; all
/// pulleys share the same radius, so the tether torque is identical at
/// every joint.
struct PhalanxChain {
  std::vector<double> lengths_m;               // per-phalanx length, base to tip
  double pulley_radius_m = 0.005;
  double opening_spring_stiffness_nm_per_rad = 0.01;  // passive opening springs
  double joint_limit_rad = 1.5707963267948966;        // max flexion per joint

  std::size_t phalanx_count() const { return lengths_m.size(); }

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

/// Line pressure (N/m) applied by each phalanx for a given tether tension,
/// ordered base to tip. For equal-length chains the entries are strictly
/// increasing; the fingertip always presses hardest.
struct PressureProfile {
  std::vector<double> pressure_n_per_m;
  double joint_torque_nm = 0.0;
};

/// Kinematic state of a finger wrapped on a target.
struct WrapState {
  std::vector<double> joint_angles_rad;  // flexion per joint, base to tip
  std::vector<bool> contact_flags;       // per phalanx
  std::vector<double> contact_arcs_m;    // arc position of the contact point
                                         // measured along the target surface
                                         // from the wrap start (0 if no contact)
};

/// Torque produced at every joint by tether tension over an identical
/// pulley: r * T. Negative tension throws std::domain_error.
double joint_torque(double pulley_radius_m, double tension_n);

/// Moment sum for joint index j in 0..n (0 at j == n). This is the
/// denominator that converts constant joint torque into the line pressure of
/// phalanx j+1. Out-of-range j throws std::out_of_range.
double moment_sum(std::span<const double> lengths_m, int j);

/// Full pressure distribution for a chain under tether tension.
PressureProfile pressure_profile(const PhalanxChain& chain, double tension_n);

/// Closed form of the pressure distribution when all phalanges share one
/// length l: 2*tau / (l^2 (n-j)(n+1-j)) for j in 0..n-1.
double equal_length_pressure(double tau_nm, double phalanx_length_m, int n, int j);

/// Chord-polygon wrap of a chain on a sphere of the given diameter. Each
/// contacting phalanx lies as a chord; the flexion of a joint between two
/// contacting chords is the mean of their chord angles (2*asin(l/D) for a
/// uniform chain). Joints clamp at the chain's joint limit, and phalanges
/// past a clamped joint (or too long to chord the sphere) are flagged
/// non-contacting. A positive standoff consumes proximal finger length
/// before the wrap begins.
WrapState wrap_on_sphere(const PhalanxChain& chain, double sphere_diameter_m,
                         double standoff_m = 0.0);

/// Converts a phalanx line pressure into the normal force seen by one of
/// `spines_in_contact` equally loaded spines. Zero spines throws
/// std::domain_error.
double per_spine_normal(double pressure_n_per_m, double phalanx_length_m,
                        int spines_in_contact);

}  // namespace gripsim
