// Microspine-asperity interaction: effective friction on a sloped asperity,
// reaction force under combined normal and tangential loading, the slip
// condition, stochastic asperity sampling, and the re-latch window.

#pragma once

#include "gripsim/rng.hpp"

#include <cstdint>

namespace gripsim {

/// Asperity slope distribution. `uniform` draws beta from [min, max];
/// `truncated_normal` restricts a normal(mean, sd) to the same support.
struct SlopeDistribution {
  enum class Kind { kUniform, kTruncatedNormal };
  Kind kind = Kind::kUniform;
  double min_rad = 0.0;
  double max_rad = 0.0;
  double mean_rad = 0.0;  // truncated_normal only
  double sd_rad = 0.0;    // truncated_normal only
};

/// Rough-surface description seen by a spine tip: Coulomb friction of the
/// bulk material plus the distribution of asperity slopes it can latch on.
struct AsperityModel {
  double base_friction = 0.4;
  SlopeDistribution slope;

  /// Enforces mu > 0, support in [0, max], and max below the self-locking
  /// slope atan(1/mu) so every sampled asperity has finite effective
  /// friction. Throws std::invalid_argument.
  void validate() const;
};

/// Spine mounting configuration of one phalanx module.
struct SpineInterface {
  int spines_per_module = 4;
  double inclination_deg = 30.0;

  void validate() const;
};

/// Live contact state of a single spine.
struct SpineState {
  bool engaged = false;
  double current_beta_rad = 0.0;
  double normal_load_n = 0.0;
  double tangential_load_n = 0.0;
};

/// Plateau-with-rolloff window used for the re-latch probability as a
/// function of tether tension: probability 1 on [low, high], falling
/// linearly to `floor` over `rolloff` on both sides.
struct RelatchWindow {
  double low_n = 195.0;
  double high_n = 240.0;
  double rolloff_n = 15.0;
  double floor = 0.15;

  void validate() const;
};

enum class SlipResult { kHolds, kSlips };

/// Effective friction coefficient of a spine latched on an asperity of
/// slope beta: (mu + tan b) / (1 - mu tan b). Equal to mu at beta = 0 and
/// strictly increasing in beta. Throws self_locking_error when
/// mu * tan(beta) >= 1.
double effective_friction(double mu, double beta_rad);

/// Reaction force at the asperity under normal load n and tangential load
/// t: n cos b + t sin b. The tangential term is what the finger-base slider
/// contributes; with t = 0 this is the pure pressure case.
double reaction_force(double normal_n, double tangential_n, double beta_rad);

/// Holding force of one spine on a local surface slope alpha:
/// mu' * (normal_term cos b + tangential_term sin b) * sin(a + b).
double spine_holding_force(double mu, double alpha_rad, double beta_rad,
                           double normal_term_n, double tangential_term_n);

/// Strict slip test: the spine holds only while the applied share is
/// strictly below its holding force.
SlipResult slip_check(double applied_n, double holding_n);

/// Draws an asperity slope from the model; always inside the distribution
/// support, deterministic given the stream state.
double sample_asperity(const AsperityModel& model, RngStream& rng);

/// Probability that a slipped spine secures a fresh asperity at the given
/// tether tension.
double relatch_probability(double tension_n, const RelatchWindow& window);

/// Minimum asperity slope a spine mounted at inclination psi can secure:
/// max(0, 45 deg - psi). Shallow-mounted spines need steep asperities.
double min_engageable_beta(double inclination_deg);

/// Usable latch slope of an engaged spine: the sampled asperity slope
/// discounted by the spine's angle deficit from the ideal 45 deg mount.
/// A spine that only just clears its engagement gate latches with nearly
/// zero effective slope.
double latch_beta(double beta_rad, double inclination_deg);

}  // namespace gripsim
