// Target surface implementation: radial fields, normals, rock synthesis.

#include "gripsim/target_model.hpp"

#include "gripsim/common.hpp"
#include "gripsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gripsim {
namespace {

// Raw (unnormalized) rock field value along a unit direction.
double raw_field(const std::vector<RockMode>& modes, const Vec3& unit_dir) {
  double sum = 0.0;
  for (const RockMode& m : modes) {
    sum += m.weight * std::cos(m.frequency * dot(unit_dir, m.axis) + m.phase_rad);
  }
  return sum;
}

// Orthonormal tangent pair completing unit_dir to a right-handed frame.
void tangent_basis(const Vec3& unit_dir, Vec3& t1, Vec3& t2) {
  const Vec3 helper = std::abs(unit_dir.x) < 0.9 ? Vec3{1.0, 0.0, 0.0}
                                                 : Vec3{0.0, 1.0, 0.0};
  t1 = normalized(cross(unit_dir, helper));
  t2 = cross(unit_dir, t1);
}

// Quasi-uniform direction set (Fibonacci spiral) for field normalization.
std::vector<Vec3> fibonacci_directions(int count) {
  std::vector<Vec3> dirs;
  dirs.reserve(count);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return dirs;
}

}  // namespace

double TargetSurface::radius_at(const Vec3& unit_dir) const {
  const double base = 0.5 * nominal_diameter_m;
  if (kind == Kind::kSphere || amplitude_m == 0.0 || modes.empty()) {
    return base;
  }
  const double raw = raw_field(modes, unit_dir);
  const double shaped =
      std::clamp((raw - field_offset) * field_scale, -1.0, 1.0);
  return base + amplitude_m * shaped;
}

Vec3 TargetSurface::point_at(const Vec3& unit_dir) const {
  return radius_at(unit_dir) * unit_dir;
}

Vec3 TargetSurface::normal_at(const Vec3& unit_dir) const {
  if (kind == Kind::kSphere || amplitude_m == 0.0 || modes.empty()) {
    return unit_dir;
  }
  // Radial surface S(u) = r(u) u. With geodesic derivatives r1', r2' along
  // an orthonormal tangent pair, the outward normal is
  // r^2 u - r r1' t1 - r r2' t2.
  Vec3 t1;
  Vec3 t2;
  tangent_basis(unit_dir, t1, t2);
  const double h = 1.0e-5;
  auto geodesic_radius = [&](const Vec3& tangent, double step) {
    const Vec3 dir =
        normalized(std::cos(step) * unit_dir + std::sin(step) * tangent);
    return radius_at(dir);
  };
  const double r = radius_at(unit_dir);
  const double dr1 =
      (geodesic_radius(t1, h) - geodesic_radius(t1, -h)) / (2.0 * h);
  const double dr2 =
      (geodesic_radius(t2, h) - geodesic_radius(t2, -h)) / (2.0 * h);
  return normalized(r * r * unit_dir - r * dr1 * t1 - r * dr2 * t2);
}

void TargetSurface::validate() const {
  if (!(nominal_diameter_m > 0.0)) {
    throw std::invalid_argument("target surface: diameter must be > 0");
  }
  if (amplitude_m < 0.0) {
    throw std::invalid_argument("target surface: amplitude must be >= 0");
  }
  if (!(amplitude_m < 0.25 * nominal_diameter_m)) {
    throw std::invalid_argument(
        "target surface: amplitude must stay below a quarter of the diameter");
  }
  if (kind == Kind::kRock && amplitude_m > 0.0) {
    if (modes.empty()) {
      throw std::invalid_argument("target surface: rock with amplitude needs modes");
    }
    if (!(correlation_scale_m > 0.0)) {
      throw std::invalid_argument(
          "target surface: rock correlation scale must be > 0");
    }
  }
  asperity.validate();
}

namespace {

AsperityModel default_asperity() {
  AsperityModel a;
  a.base_friction = 0.4;
  a.slope.kind = SlopeDistribution::Kind::kUniform;
  a.slope.min_rad = 0.0;
  a.slope.max_rad = deg_to_rad(40.0);
  return a;
}

}  // namespace

TargetSurface make_sphere(double diameter_m) {
  if (!(diameter_m > 0.0)) {
    throw std::invalid_argument("make_sphere: diameter must be > 0");
  }
  TargetSurface s;
  s.kind = TargetSurface::Kind::kSphere;
  s.nominal_diameter_m = diameter_m;
  s.asperity = default_asperity();
  return s;
}

std::array<double, 3> sphere_family(double gripper_diameter_m) {
  if (!(gripper_diameter_m > 0.0)) {
    throw std::invalid_argument("sphere_family: gripper diameter must be > 0");
  }
  return {0.5 * gripper_diameter_m, gripper_diameter_m,
          1.5 * gripper_diameter_m};
}

TargetSurface make_rock(std::uint64_t seed, double base_diameter_m,
                        double roughness_amplitude_m,
                        double correlation_scale_m) {
  if (!(base_diameter_m > 0.0)) {
    throw std::invalid_argument("make_rock: diameter must be > 0");
  }
  if (roughness_amplitude_m < 0.0 ||
      !(roughness_amplitude_m < 0.25 * base_diameter_m)) {
    throw std::invalid_argument(
        "make_rock: amplitude must be in [0, diameter/4)");
  }
  if (!(correlation_scale_m > 0.0)) {
    throw std::invalid_argument("make_rock: correlation scale must be > 0");
  }
  TargetSurface rock;
  rock.kind = TargetSurface::Kind::kRock;
  rock.nominal_diameter_m = base_diameter_m;
  rock.amplitude_m = roughness_amplitude_m;
  rock.correlation_scale_m = correlation_scale_m;
  rock.rock_seed = seed;
  rock.asperity = default_asperity();
  if (roughness_amplitude_m == 0.0) {
    rock.validate();
    return rock;  // degenerate rock: exact sphere
  }
  // Angular frequency so one bump spans roughly one correlation scale of
  // arc: radius * (2 pi / freq) ~ correlation scale.
  const double base_radius = 0.5 * base_diameter_m;
  const double center_freq = 2.0 * kPi * base_radius / correlation_scale_m;
  constexpr int kModeCount = 12;
  RngStream rng(seed);
  rock.modes.reserve(kModeCount);
  for (int i = 0; i < kModeCount; ++i) {
    RockMode m;
    // Uniform axis on the sphere from three normal deviates.
    Vec3 axis{rng.normal(), rng.normal(), rng.normal()};
    if (norm(axis) < 1.0e-12) {
      axis = {0.0, 0.0, 1.0};
    }
    m.axis = normalized(axis);
    m.frequency = rng.uniform(0.5 * center_freq, 1.5 * center_freq);
    m.phase_rad = rng.uniform(0.0, 2.0 * kPi);
    m.weight = rng.uniform(0.5, 1.0);
    rock.modes.push_back(m);
  }
  // Normalize the raw field so the clamped radius spans the full
  // base/2 +- amplitude band.
  double raw_min = 0.0;
  double raw_max = 0.0;
  bool first = true;
  for (const Vec3& dir : fibonacci_directions(2048)) {
    const double v = raw_field(rock.modes, dir);
    if (first) {
      raw_min = raw_max = v;
      first = false;
    } else {
      raw_min = std::min(raw_min, v);
      raw_max = std::max(raw_max, v);
    }
  }
  rock.field_offset = 0.5 * (raw_min + raw_max);
  const double span = raw_max - raw_min;
  rock.field_scale = span > 1.0e-12 ? 2.0 / span : 0.0;
  rock.validate();
  return rock;
}

double local_slope(const Vec3& surface_normal, const Vec3& pull_direction) {
  const Vec3 n = normalized(surface_normal);
  const Vec3 p = normalized(pull_direction);
  const double cosine = std::clamp(dot(n, p), 0.0, 1.0);
  return std::acos(cosine);
}

double local_slope(const TargetSurface& target, const Vec3& contact_point,
                   const Vec3& pull_direction) {
  return local_slope(target.normal_at(normalized(contact_point)),
                     pull_direction);
}

}  // namespace gripsim
