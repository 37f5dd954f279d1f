// CLI front end: subcommand wiring and exit-code mapping only; all work
// happens in the command layer.

#include "gripsim/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{
      "Quasi-static grasp simulator and design-sweep toolkit for a "
      "tendon-driven, microspine-equipped gripper"};
  app.require_subcommand(1);

  gripsim::CommandOptions opts;
  std::string mode_str;
  gripsim::MissionOptions mission;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path,
                    "scenario config file (JSON)")
        ->required();
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("--reps", opts.repetitions,
                    "repetitions per scenario or cell");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--workers", opts.workers,
                    "worker threads (0 = machine parallelism)");
    cmd->add_option("--mode", mode_str,
                    "contact normal handling: consistent converts line "
                    "pressure to a per-spine force, literal feeds it in "
                    "as written")
        ->check(CLI::IsMember({"literal", "consistent"}));
  };

  CLI::App* pressure = app.add_subcommand(
      "pressure",
      "per-phalanx line pressures for the configured chain and current");
  add_common(pressure);
  CLI::App* detach = app.add_subcommand(
      "detach", "simulate pull tests; writes trace and summary CSVs");
  add_common(detach);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run the design sweep over the config's axes");
  add_common(sweep);
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "fit the re-latch window to the target current band");
  add_common(calibrate);

  CLI::App* mission_cmd = app.add_subcommand(
      "mission", "required per-gripper force for a hanging robot");
  mission_cmd->add_option("--mass-kg", mission.mass_kg, "robot mass")
      ->required();
  mission_cmd
      ->add_option("--gravity", mission.gravity,
                   "moon, mars, earth, or a number in m/s^2")
      ->required();
  mission_cmd->add_option("--stance-legs", mission.stance_legs,
                          "legs in stance (tripod gait = 3)")
      ->required();
  mission_cmd->add_option("--capability-mean-n", mission.capability_mean_n,
                          "measured grasp capability mean");
  mission_cmd->add_option("--capability-std-n", mission.capability_std_n,
                          "measured grasp capability standard deviation");
  mission_cmd->add_option("--out", mission.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gripsim::kExitConfigError;
  }

  if (!mode_str.empty()) {
    opts.mode = mode_str == "literal" ? gripsim::ContactMode::kLiteral
                                      : gripsim::ContactMode::kConsistentUnits;
  }

  if (pressure->parsed()) {
    return gripsim::cmd_pressure(opts, std::cout, std::cerr);
  }
  if (detach->parsed()) {
    return gripsim::cmd_detach(opts, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    return gripsim::cmd_sweep(opts, std::cout, std::cerr);
  }
  if (calibrate->parsed()) {
    return gripsim::cmd_calibrate(opts, std::cout, std::cerr);
  }
  if (mission_cmd->parsed()) {
    return gripsim::cmd_mission(mission, std::cout, std::cerr);
  }
  return gripsim::kExitConfigError;
}
