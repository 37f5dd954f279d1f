// Command layer behind the CLI: each cmd_* loads a config, runs the
// corresponding pipeline, writes its CSV outputs, and returns a process
// exit code. Kept out of main() so tests can drive commands directly.

#pragma once

#include "gripsim/grasp_sim.hpp"
#include "gripsim/scenario_config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace gripsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

/// Flags shared by the config-driven subcommands.
struct CommandOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::optional<int> repetitions;     // overrides the per-command default
  std::string out_dir;                // output directory; required by
                                      // detach/sweep/calibrate
  int workers = 0;                    // 0 = machine parallelism
  std::optional<ContactMode> mode;    // overrides the config contact mode
};

/// Inputs for the mission load estimate.
struct MissionOptions {
  double mass_kg = 0.0;
  std::string gravity;  // body name (moon/mars/earth) or numeric m/s^2
  int stance_legs = 0;
  std::optional<double> capability_mean_n;
  std::optional<double> capability_std_n;
  std::string out_dir;  // optional; report also goes to stdout
};

/// Per-phalanx line pressures for the configured chain at the tether
/// tension implied by the configured drive current.
int cmd_pressure(const CommandOptions& opts, std::ostream& out,
                 std::ostream& err);

/// Pull tests at seeds seed..seed+reps-1: per-run trace CSVs plus a summary
/// CSV, one row per run.
int cmd_detach(const CommandOptions& opts, std::ostream& out,
               std::ostream& err);

/// Full design sweep over the config's axes; cells run on a worker pool and
/// are emitted in canonical sorted order with per-cell statistics.
int cmd_sweep(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Required per-gripper force for a hanging robot, with an optional margin
/// against a measured capability distribution.
int cmd_mission(const MissionOptions& opts, std::ostream& out,
                std::ostream& err);

/// Re-latch window search: writes the fitted window and its current-response
/// curve.
int cmd_calibrate(const CommandOptions& opts, std::ostream& out,
                  std::ostream& err);

/// Stable row label a reader can eyeball: diameter, pull angle, spine
/// geometry, and drive current.
std::string scenario_id(const GraspScenario& scenario);

/// Header + row helpers shared between detach and sweep output.
std::string summary_header();
std::string summary_row(const GraspScenario& scenario,
                        const DetachmentTrace& trace);
std::string trace_header(std::size_t finger_count);
std::string trace_csv(const GraspScenario& scenario,
                      const DetachmentTrace& trace);

/// Cells of a sweep in canonical order (sorted by diameter, angle,
/// interface, current), seeds pre-assigned as base_seed + index * reps so
/// results never depend on worker scheduling.
std::vector<GraspScenario> sweep_cells(const GraspScenario& base,
                                       const SweepAxes& axes);

}  // namespace gripsim
