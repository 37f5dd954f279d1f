// Microspine contact mechanics implementation.

#include "gripsim/spine_contact.hpp"

#include "gripsim/common.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gripsim {

void AsperityModel::validate() const {
  if (!(base_friction > 0.0)) {
    throw std::invalid_argument("asperity model: base friction must be > 0");
  }
  const double self_lock_rad = std::atan(1.0 / base_friction);
  auto check_bound = [&](double value_rad, const char* name) {
    if (!(value_rad >= 0.0)) {
      throw std::invalid_argument(std::string("asperity model: ") + name +
                                  " must be >= 0");
    }
    if (!(value_rad < self_lock_rad)) {
      throw std::invalid_argument(
          std::string("asperity model: ") + name +
          " must stay below the self-locking slope atan(1/mu)");
    }
  };
  switch (slope.kind) {
    case SlopeDistribution::Kind::kUniform:
      check_bound(slope.min_rad, "slope min");
      check_bound(slope.max_rad, "slope max");
      if (!(slope.max_rad >= slope.min_rad)) {
        throw std::invalid_argument("asperity model: slope max must be >= min");
      }
      break;
    case SlopeDistribution::Kind::kTruncatedNormal:
      check_bound(slope.min_rad, "slope min");
      check_bound(slope.max_rad, "slope max");
      if (!(slope.max_rad >= slope.min_rad)) {
        throw std::invalid_argument("asperity model: slope max must be >= min");
      }
      if (!(slope.sd_rad > 0.0)) {
        throw std::invalid_argument(
            "asperity model: slope sd must be > 0 for truncated normal");
      }
      break;
  }
}

void SpineInterface::validate() const {
  if (spines_per_module < 1) {
    throw std::invalid_argument("spine interface: need at least one spine");
  }
  if (!(inclination_deg > 0.0) || !(inclination_deg < 90.0)) {
    throw std::invalid_argument(
        "spine interface: inclination must be in (0, 90) degrees");
  }
}

void RelatchWindow::validate() const {
  if (!(low_n >= 0.0) || !(high_n > low_n)) {
    throw std::invalid_argument("relatch window: need 0 <= low < high");
  }
  if (!(rolloff_n > 0.0)) {
    throw std::invalid_argument("relatch window: rolloff must be > 0");
  }
  if (!(floor >= 0.0) || !(floor <= 1.0)) {
    throw std::invalid_argument("relatch window: floor must be in [0, 1]");
  }
}

double effective_friction(double mu, double beta_rad) {
  if (!(mu > 0.0)) {
    throw std::domain_error("effective friction: mu must be > 0");
  }
  const double tan_b = std::tan(beta_rad);
  const double denom = 1.0 - mu * tan_b;
  if (denom <= 0.0) {
    throw self_locking_error(
        "effective friction: mu * tan(beta) >= 1, asperity is self-locking");
  }
  return (mu + tan_b) / denom;
}

double reaction_force(double normal_n, double tangential_n, double beta_rad) {
  if (normal_n < 0.0 || tangential_n < 0.0) {
    throw std::domain_error("reaction force: loads must be non-negative");
  }
  return normal_n * std::cos(beta_rad) + tangential_n * std::sin(beta_rad);
}

double spine_holding_force(double mu, double alpha_rad, double beta_rad,
                           double normal_term_n, double tangential_term_n) {
  // Self-locking geometry pins rather than slides; an effectively infinite
  // hold is represented by a large finite cap so downstream sums stay sane.
  constexpr double kSelfLockingCap_n = 1.0e4;
  double mu_eff;
  try {
    mu_eff = effective_friction(mu, beta_rad);
  } catch (const self_locking_error&) {
    return kSelfLockingCap_n;
  }
  const double reaction = reaction_force(normal_term_n, tangential_term_n, beta_rad);
  const double hold = mu_eff * reaction * std::sin(alpha_rad + beta_rad);
  return hold < 0.0 ? 0.0 : hold;
}

SlipResult slip_check(double applied_n, double holding_n) {
  return applied_n < holding_n ? SlipResult::kHolds : SlipResult::kSlips;
}

double sample_asperity(const AsperityModel& model, RngStream& rng) {
  switch (model.slope.kind) {
    case SlopeDistribution::Kind::kUniform:
      return rng.uniform(model.slope.min_rad, model.slope.max_rad);
    case SlopeDistribution::Kind::kTruncatedNormal:
      return rng.truncated_normal(model.slope.mean_rad, model.slope.sd_rad,
                                  model.slope.min_rad, model.slope.max_rad);
  }
  throw std::logic_error("sample_asperity: unknown slope distribution kind");
}

double relatch_probability(double tension_n, const RelatchWindow& window) {
  if (tension_n >= window.low_n && tension_n <= window.high_n) {
    return 1.0;
  }
  const double dist = tension_n < window.low_n ? window.low_n - tension_n
                                               : tension_n - window.high_n;
  if (dist >= window.rolloff_n) {
    return window.floor;
  }
  const double t = dist / window.rolloff_n;
  return 1.0 + (window.floor - 1.0) * t;
}

double min_engageable_beta(double inclination_deg) {
  const double gate_deg = 45.0 - inclination_deg;
  return gate_deg > 0.0 ? deg_to_rad(gate_deg) : 0.0;
}

double latch_beta(double beta_rad, double inclination_deg) {
  const double usable = beta_rad - min_engageable_beta(inclination_deg);
  return usable > 0.0 ? usable : 0.0;
}

}  // namespace gripsim
