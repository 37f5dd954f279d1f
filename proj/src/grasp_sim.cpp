// Detachment engine implementation.

#include "gripsim/grasp_sim.hpp"

#include "gripsim/common.hpp"
#include "gripsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gripsim {

void SimTuning::validate() const {
  if (!(settle_fraction >= 0.0) || settle_fraction >= 1.0) {
    throw std::invalid_argument("tuning: settle fraction must be in [0, 1)");
  }
  if (settle_attempts < 1) {
    throw std::invalid_argument("tuning: need at least one settle attempt");
  }
  if (!(opposition_boost >= 1.0)) {
    throw std::invalid_argument("tuning: opposition boost must be >= 1");
  }
  if (lateral_coupling < 0.0 || lateral_coupling > 1.0) {
    throw std::invalid_argument("tuning: lateral coupling must be in [0, 1]");
  }
  relatch.validate();
  if (max_relatch_per_step < 0) {
    throw std::invalid_argument("tuning: re-latch budget must be >= 0");
  }
  if (!(force_step_n > 0.0)) {
    throw std::invalid_argument("tuning: force step must be > 0");
  }
  if (!(force_cap_n > 0.0)) {
    throw std::invalid_argument("tuning: force cap must be > 0");
  }
}

void GraspScenario::validate() const {
  chain.validate();
  if (finger_azimuths_deg.size() < 2 || finger_azimuths_deg.size() > 8) {
    throw std::invalid_argument("scenario: need 2..8 fingers");
  }
  spines.validate();
  target.validate();
  actuator.validate();
  if (pull_angle_deg < 0.0 || pull_angle_deg > 90.0) {
    throw std::invalid_argument("scenario: pull angle must be in [0, 90] degrees");
  }
  if (!(ramp_rate_n_per_s > 0.0)) {
    throw std::invalid_argument("scenario: ramp rate must be > 0");
  }
  if (current_a < 0.0 || current_a > 2.0 * actuator.anchor_high_current_a) {
    throw std::invalid_argument(
        "scenario: current must be in [0, 2x upper torque anchor]");
  }
  if (standoff_m < 0.0) {
    throw std::invalid_argument("scenario: standoff must be >= 0");
  }
  tuning.validate();
}

GraspScenario default_scenario() {
  GraspScenario s;
  s.chain.lengths_m = {0.03, 0.03, 0.03, 0.03};
  s.chain.pulley_radius_m = 0.005;
  s.chain.opening_spring_stiffness_nm_per_rad = 0.01;
  s.chain.joint_limit_rad = kPi / 2.0;
  s.finger_azimuths_deg = {0.0, 90.0, 180.0, 270.0};
  s.spines.spines_per_module = 4;
  s.spines.inclination_deg = 30.0;
  s.target = make_sphere(0.270);
  // Stiff take-up springs keep the equilibrium stroke well inside the plate
  // travel at the upper end of the current range.
  s.actuator.desync_stiffness_n_per_m = 20000.0;
  s.current_a = 0.225;
  s.ramp_rate_n_per_s = 10.0;
  s.seed = 1;
  return s;
}

namespace {

// Fixed per-contact geometry and loading terms for one finger.
struct ContactGeom {
  int phalanx = 0;  // 1-based, base to tip
  double sin_alpha = 0.0;
  double cos_alpha = 1.0;
  bool opposed = false;        // outward normal opposes the retention direction
  double normal_term_n = 0.0;  // per-spine normal (or literal line-pressure value)
};

// Live latch state of one spine; trig of the latch slope is cached because
// it only changes at (re-)latch events.
struct SpineSlot {
  int contact = 0;  // index into the finger's contact list
  bool engaged = false;
  double cos_beta = 1.0;
  double sin_beta = 0.0;
  double mu_eff = 0.0;
  int relatch_left = 0;
  bool deferred = false;  // out of re-latch budget for the current step
};

struct FingerSim {
  RngStream rng;
  std::vector<ContactGeom> contacts;
  std::vector<SpineSlot> spines;  // contact-major, spine-minor
  int engaged_count = 0;
  double tension_n = 0.0;
  // Tether-tension share per spine of the contacting array. The array size
  // is fixed at wrap time: a disengaged spine's patch of phalanx still
  // presses and rubs, so its neighbours' preload share does not grow.
  double tangential_share_n = 0.0;
  bool alive = true;
};

void set_latch(SpineSlot& slot, double beta_eff_rad, double mu) {
  slot.cos_beta = std::cos(beta_eff_rad);
  slot.sin_beta = std::sin(beta_eff_rad);
  slot.mu_eff = effective_friction(mu, beta_eff_rad);
  slot.engaged = true;
}

// Holding capacity of one engaged spine:
// mu' * (N cos b + Tg sin b) * sin(alpha + b), boosted on opposed contacts.
double latch_capacity(const ContactGeom& g, const SpineSlot& s,
                      double tangential_n, double opposition_boost) {
  const double reaction = g.normal_term_n * s.cos_beta + tangential_n * s.sin_beta;
  const double sin_sum = g.sin_alpha * s.cos_beta + g.cos_alpha * s.sin_beta;
  double cap = s.mu_eff * reaction * sin_sum;
  if (cap < 0.0) {
    cap = 0.0;
  }
  return g.opposed ? cap * opposition_boost : cap;
}

}  // namespace

DetachmentTrace simulate_detachment(const GraspScenario& scenario) {
  scenario.validate();
  const int n_fingers = static_cast<int>(scenario.finger_azimuths_deg.size());
  const int spines_per_module = scenario.spines.spines_per_module;
  const double mu = scenario.target.asperity.base_friction;
  const double gate_rad = min_engageable_beta(scenario.spines.inclination_deg);

  // Wrap and close. All fingers share the wrap (radially symmetric grasp of
  // a star-convex body at its nominal diameter), so they block at the same
  // take-up and the plate force splits evenly.
  const WrapState wrap = wrap_on_sphere(scenario.chain,
                                        scenario.target.nominal_diameter_m,
                                        scenario.standoff_m);
  const ClosureState closure = close_to_equilibrium(
      std::vector<WrapState>(n_fingers, wrap), scenario.chain,
      scenario.actuator, scenario.current_a);

  // Retention direction: where the grasp must hold the target, i.e. against
  // the external pull tilted pull_angle off the gripper axis.
  const double theta = deg_to_rad(scenario.pull_angle_deg);
  const double zeta_p = deg_to_rad(scenario.pull_azimuth_deg);
  const Vec3 retention = {-std::sin(theta) * std::cos(zeta_p),
                          -std::sin(theta) * std::sin(zeta_p),
                          std::cos(theta)};

  const double target_radius = 0.5 * scenario.target.nominal_diameter_m;
  const auto& lengths = scenario.chain.lengths_m;
  const double pulley_r = scenario.chain.pulley_radius_m;
  const double k_open = scenario.chain.opening_spring_stiffness_nm_per_rad;

  std::vector<FingerSim> fingers;
  fingers.reserve(n_fingers);
  for (int i = 0; i < n_fingers; ++i) {
    FingerSim f{RngStream::substream(scenario.seed, static_cast<std::uint64_t>(i) + 1)};
    f.tension_n = closure.tether_tension_n[i];
    const double zeta_i = deg_to_rad(scenario.finger_azimuths_deg[i]);
    for (std::size_t k = 0; k < lengths.size(); ++k) {
      if (!wrap.contact_flags[k]) {
        continue;
      }
      ContactGeom g;
      g.phalanx = static_cast<int>(k) + 1;
      // Contact position on the target: the wrap starts at the pole facing
      // the palm and runs down the finger's meridian.
      const double polar = wrap.contact_arcs_m[k] / target_radius;
      const Vec3 dir = {std::sin(polar) * std::cos(zeta_i),
                        std::sin(polar) * std::sin(zeta_i), std::cos(polar)};
      const Vec3 normal = scenario.target.normal_at(dir);
      const double alpha = local_slope(normal, retention);
      g.sin_alpha = std::sin(alpha);
      g.cos_alpha = std::cos(alpha);
      g.opposed = dot(normal, retention) < 0.0;
      // Per-joint closing torque, less the passive opening spring.
      const double tau_eff = std::max(
          0.0, joint_torque(pulley_r, f.tension_n) - k_open * wrap.joint_angles_rad[k]);
      const double line_pressure = tau_eff / moment_sum(lengths, static_cast<int>(k));
      g.normal_term_n =
          scenario.mode == ContactMode::kConsistentUnits
              ? per_spine_normal(line_pressure, lengths[k], spines_per_module)
              : line_pressure;
      f.contacts.push_back(g);
    }
    f.spines.resize(f.contacts.size() * spines_per_module);
    for (std::size_t s = 0; s < f.spines.size(); ++s) {
      f.spines[s].contact = static_cast<int>(s / spines_per_module);
    }
    fingers.push_back(std::move(f));
  }

  // Settlement: during closure each spine drags until it finds an asperity
  // it can actually hold on. A latch qualifies when its capacity reaches
  // settle_fraction of the spine's nominal tension share.
  for (FingerSim& f : fingers) {
    const int total = static_cast<int>(f.spines.size());
    if (total == 0) {
      f.alive = false;
      continue;
    }
    f.tangential_share_n = f.tension_n / total;
    const double nominal_tangential = f.tangential_share_n;
    const double threshold = scenario.tuning.settle_fraction * nominal_tangential;
    for (SpineSlot& slot : f.spines) {
      for (int attempt = 0; attempt < scenario.tuning.settle_attempts; ++attempt) {
        const double beta = sample_asperity(scenario.target.asperity, f.rng);
        if (beta < gate_rad) {
          continue;  // cannot secure this asperity at the mounting angle
        }
        set_latch(slot, latch_beta(beta, scenario.spines.inclination_deg), mu);
        if (latch_capacity(f.contacts[slot.contact], slot, nominal_tangential,
                           scenario.tuning.opposition_boost) >= threshold) {
          break;
        }
        slot.engaged = false;
      }
      if (slot.engaged) {
        ++f.engaged_count;
      }
    }
    f.alive = f.engaged_count > 0;
  }

  DetachmentTrace trace;
  TraceSample start;
  start.finger_load_n.assign(n_fingers, 0.0);
  trace.samples.push_back(start);

  std::vector<bool> alive(n_fingers, true);
  std::vector<double> last_loads(n_fingers, 0.0);
  int slip_cum = 0;

  const double step_n = scenario.tuning.force_step_n;
  const double cap_n = scenario.tuning.force_cap_n;
  const int n_steps = static_cast<int>(std::ceil(cap_n / step_n - 1.0e-9));

  for (int step = 1; step <= n_steps && !trace.detached; ++step) {
    const double force = step == n_steps ? cap_n : step * step_n;
    for (int i = 0; i < n_fingers; ++i) {
      alive[i] = fingers[i].alive;
    }
    for (FingerSim& f : fingers) {
      for (SpineSlot& slot : f.spines) {
        slot.relatch_left = scenario.tuning.max_relatch_per_step;
        slot.deferred = false;
      }
    }
    TraceSample sample;
    sample.time_s = force / scenario.ramp_rate_n_per_s;
    sample.applied_force_n = force;
    bool balanced = false;

    // Process slip events to a fixed point before the next increment.
    bool changed = true;
    while (changed && !trace.detached) {
      changed = false;
      const LoadDistribution dist = distribute_load(
          force, scenario.pull_angle_deg, scenario.finger_azimuths_deg,
          scenario.pull_azimuth_deg, scenario.tuning.lateral_coupling, &alive);
      if (!dist.feasible) {
        trace.detached = true;
        break;
      }
      balanced = true;
      trace.max_force_n = force;
      last_loads = dist.loads_n;
      for (int i = 0; i < n_fingers; ++i) {
        FingerSim& f = fingers[i];
        if (!f.alive) {
          continue;
        }
        const double share = dist.loads_n[i] / f.engaged_count;
        const double tangential = f.tangential_share_n;
        for (std::size_t s = 0; s < f.spines.size(); ++s) {
          SpineSlot& slot = f.spines[s];
          if (!slot.engaged || slot.deferred) {
            continue;
          }
          const double capacity =
              latch_capacity(f.contacts[slot.contact], slot, tangential,
                             scenario.tuning.opposition_boost);
          if (slip_check(share, capacity) == SlipResult::kHolds) {
            continue;
          }
          changed = true;
          ++slip_cum;
          if (!trace.first_slip_force_n) {
            trace.first_slip_force_n = force;
          }
          SlipEvent ev;
          ev.force_n = force;
          ev.finger = i;
          ev.phalanx = f.contacts[slot.contact].phalanx;
          ev.spine = static_cast<int>(s) % spines_per_module;
          if (slot.relatch_left > 0) {
            --slot.relatch_left;
            bool kept = false;
            if (f.rng.bernoulli(
                    relatch_probability(f.tension_n, scenario.tuning.relatch))) {
              const double beta = sample_asperity(scenario.target.asperity, f.rng);
              if (beta >= gate_rad) {
                set_latch(slot, latch_beta(beta, scenario.spines.inclination_deg), mu);
                kept = true;
                if (slot.relatch_left == 0) {
                  slot.deferred = true;  // holds its new latch until next step
                }
              }
            }
            if (!kept) {
              slot.engaged = false;
              --f.engaged_count;
            }
            ev.relatched = kept;
          } else {
            slot.deferred = true;  // budget spent; re-examined next step
          }
          sample.slip_events.push_back(ev);
        }
        if (f.engaged_count == 0) {
          f.alive = false;
          alive[i] = false;
        }
      }
    }

    if (balanced) {
      sample.finger_load_n = last_loads;
      sample.slip_count_cum = slip_cum;
      trace.samples.push_back(std::move(sample));
    }
  }
  return trace;
}

SweepStats monte_carlo(const GraspScenario& scenario, int repetitions) {
  if (repetitions < 1) {
    throw std::domain_error("monte_carlo: need at least one repetition");
  }
  scenario.validate();
  SweepStats stats;
  stats.repetitions = repetitions;
  std::vector<double> maxima;
  maxima.reserve(repetitions);
  double slip_sum = 0.0;
  int slip_count = 0;
  int detached = 0;
  for (int r = 0; r < repetitions; ++r) {
    GraspScenario rep = scenario;
    rep.seed = scenario.seed + static_cast<std::uint64_t>(r);
    const DetachmentTrace trace = simulate_detachment(rep);
    maxima.push_back(trace.max_force_n);
    if (trace.first_slip_force_n) {
      slip_sum += *trace.first_slip_force_n;
      ++slip_count;
    }
    if (trace.detached) {
      ++detached;
    }
  }
  const double n = static_cast<double>(maxima.size());
  const double mean = std::accumulate(maxima.begin(), maxima.end(), 0.0) / n;
  double var = 0.0;
  for (double x : maxima) {
    var += (x - mean) * (x - mean);
  }
  stats.mean_max_force_n = mean;
  stats.std_max_force_n = std::sqrt(var / n);
  stats.min_max_force_n = *std::min_element(maxima.begin(), maxima.end());
  stats.max_max_force_n = *std::max_element(maxima.begin(), maxima.end());
  stats.mean_first_slip_n = slip_count > 0 ? slip_sum / slip_count : 0.0;
  stats.detach_fraction = detached / n;
  return stats;
}

double required_grip_force(double mass_kg, double gravity_mps2, int stance_legs) {
  if (stance_legs < 1) {
    throw std::domain_error("required_grip_force: need at least one stance leg");
  }
  if (mass_kg < 0.0 || gravity_mps2 < 0.0) {
    throw std::domain_error("required_grip_force: mass and gravity must be >= 0");
  }
  return mass_kg * gravity_mps2 / stance_legs;
}

std::vector<double> current_response(const GraspScenario& base,
                                     const RelatchWindow& window,
                                     const std::vector<double>& current_grid_a,
                                     int repetitions) {
  std::vector<double> curve;
  curve.reserve(current_grid_a.size());
  for (std::size_t c = 0; c < current_grid_a.size(); ++c) {
    GraspScenario cell = base;
    cell.tuning.relatch = window;
    cell.current_a = current_grid_a[c];
    cell.seed = base.seed + c * static_cast<std::uint64_t>(repetitions);
    curve.push_back(monte_carlo(cell, repetitions).mean_max_force_n);
  }
  return curve;
}

CalibrationResult calibrate_relatch(const CalibrationBand& band,
                                    const GraspScenario& base_scenario,
                                    int repetitions,
                                    const std::vector<RelatchWindow>* candidates) {
  if (band.current_grid_a.empty() || band.best_currents_a.empty()) {
    throw std::invalid_argument(
        "calibrate_relatch: current grid and target band must be non-empty");
  }
  if (candidates != nullptr && candidates->empty()) {
    throw std::invalid_argument("calibrate_relatch: empty candidate list");
  }
  auto in_band = [&](double current) {
    return std::any_of(band.best_currents_a.begin(), band.best_currents_a.end(),
                       [&](double b) { return std::abs(b - current) < 1.0e-9; });
  };

  // Default candidate windows: plateau edges bracketing the tether tensions
  // of the band currents, fixed rolloff and floor.
  std::vector<RelatchWindow> grid;
  if (candidates == nullptr) {
    for (double low : {185.0, 195.0, 205.0}) {
      for (double high : {230.0, 240.0, 250.0}) {
        RelatchWindow w;
        w.low_n = low;
        w.high_n = high;
        w.rolloff_n = 15.0;
        w.floor = 0.15;
        grid.push_back(w);
      }
    }
    candidates = &grid;
  }

  CalibrationResult best;
  double best_score = -std::numeric_limits<double>::infinity();
  bool have_converged = false;
  for (const RelatchWindow& w : *candidates) {
    const std::vector<double> curve =
        current_response(base_scenario, w, band.current_grid_a, repetitions);
    std::size_t peak = 0;
    for (std::size_t j = 1; j < curve.size(); ++j) {
      if (curve[j] > curve[peak]) {
        peak = j;
      }
    }
    const bool converged = in_band(band.current_grid_a[peak]);
    double off_band = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < curve.size(); ++j) {
      if (!in_band(band.current_grid_a[j])) {
        off_band = std::max(off_band, curve[j]);
      }
    }
    const double score = std::isfinite(off_band) ? curve[peak] - off_band : curve[peak];
    const bool better = converged && !have_converged
                            ? true
                            : converged == have_converged && score > best_score;
    if (better) {
      best.window = w;
      best.converged = converged;
      best.current_grid_a = band.current_grid_a;
      best.mean_max_force_n = curve;
      best_score = score;
      have_converged = have_converged || converged;
    }
  }
  return best;
}

}  // namespace gripsim
