// Graspable target geometry: smooth spheres of the size family matched to
// the gripper envelope, and irregular "rock" surfaces built from band-limited
// radial noise. Each target carries the friction/asperity model its surface
// presents to the spines, and provides the local slope relative to a pull
// direction, which drives spine holding capacity.

#pragma once

#include "gripsim/geometry.hpp"
#include "gripsim/spine_contact.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace gripsim {

/// One cosine mode of the rock radial field: weight * cos(freq * (dir.axis) + phase).
struct RockMode {
  Vec3 axis;  // unit direction the mode varies along
  double frequency = 0.0;
  double phase_rad = 0.0;
  double weight = 0.0;
};

/// Star-convex target surface described by a radial field r(direction).
/// Spheres have a constant field; rocks superpose cosine modes, normalized
/// so the radius stays within nominal/2 +- amplitude.
struct TargetSurface {
  enum class Kind { kSphere, kRock };
  Kind kind = Kind::kSphere;
  double nominal_diameter_m = 0.270;
  double amplitude_m = 0.0;            // rock only
  double correlation_scale_m = 0.0;    // rock only: bump wavelength along the surface
  std::uint64_t rock_seed = 0;         // rock only
  std::vector<RockMode> modes;         // rock only
  double field_offset = 0.0;           // rock normalization
  double field_scale = 0.0;            // rock normalization
  AsperityModel asperity;              // what the spines latch on

  /// Radius along a unit direction from the body center.
  double radius_at(const Vec3& unit_dir) const;

  /// Surface point along a unit direction.
  Vec3 point_at(const Vec3& unit_dir) const;

  /// Outward unit normal: analytic for spheres, central-difference on the
  /// radial field for rocks.
  Vec3 normal_at(const Vec3& unit_dir) const;

  /// Enforces positive diameter, amplitude below a quarter of the diameter
  /// (keeps the radial field positive, hence the body star-convex), and a
  /// valid asperity model. Throws std::invalid_argument.
  void validate() const;
};

/// Sphere of the given outer diameter (default asperity model attached).
TargetSurface make_sphere(double diameter_m);

/// The three test diameters matched to a gripper of envelope diameter D:
/// D/2, D, 3D/2.
std::array<double, 3> sphere_family(double gripper_diameter_m);

/// Irregular target: random cosine modes whose angular frequency is set by
/// `correlation_scale_m` (the surface wavelength of the bumps), normalized
/// so the radius spans base/2 +- amplitude. Deterministic for a given seed.
TargetSurface make_rock(std::uint64_t seed, double base_diameter_m,
                        double roughness_amplitude_m,
                        double correlation_scale_m);

/// Local slope at a contact: the angle between the outward surface normal
/// and the pull direction, clamped to [0, pi/2]. For a sphere pulled along
/// its polar axis this equals the contact's polar angle: zero at the pole,
/// pi/2 at the equator. Pulls opposing the normal also read pi/2.
double local_slope(const Vec3& surface_normal, const Vec3& pull_direction);

/// Same, evaluated on a target surface at a contact point (given by its
/// direction from the body center).
double local_slope(const TargetSurface& target, const Vec3& contact_point,
                   const Vec3& pull_direction);

}  // namespace gripsim
