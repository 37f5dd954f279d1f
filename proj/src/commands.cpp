// Command layer implementation: config loading, CSV emission, the sweep
// worker pool, and exit-code mapping.

#include "gripsim/commands.hpp"

#include "gripsim/common.hpp"
#include "gripsim/csv.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

namespace gripsim {
namespace {

namespace fs = std::filesystem;

// Maps exceptions to the documented exit codes. Config and validation
// problems are the caller's fault (2); anything else is a runtime fault (3).
template <typename Fn>
int run_guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const config_error& e) {
    for (const auto& v : e.violations()) {
      err << "config error: " << v << "\n";
    }
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

fs::path prepare_out_dir(const std::string& out_dir, const char* command) {
  if (out_dir.empty()) {
    throw config_error({std::string(command) + " requires --out DIRECTORY"});
  }
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory: " + dir.string());
  }
  return dir;
}

GraspScenario scenario_with_overrides(const ScenarioConfig& config,
                                      const CommandOptions& opts) {
  GraspScenario s = config.scenario;
  if (opts.seed) {
    s.seed = *opts.seed;
  }
  if (opts.mode) {
    s.mode = *opts.mode;
  }
  return s;
}

int resolve_reps(const CommandOptions& opts, int fallback) {
  const int reps = opts.repetitions.value_or(fallback);
  if (reps < 1) {
    throw config_error({"--reps must be >= 1"});
  }
  return reps;
}

unsigned resolve_workers(const CommandOptions& opts, std::size_t jobs) {
  unsigned n = opts.workers > 0 ? static_cast<unsigned>(opts.workers)
                                : std::thread::hardware_concurrency();
  if (n == 0) {
    n = 1;
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// "" cell for runs where no slip ever fired.
std::string first_slip_cell(const std::optional<double>& first_slip) {
  return first_slip ? format_g9(*first_slip) : std::string();
}

}  // namespace

std::string scenario_id(const GraspScenario& s) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "d%03.0f_a%02.0f_s%02.0fx%d_c%.3f",
                s.target.nominal_diameter_m * 1000.0, s.pull_angle_deg,
                s.spines.inclination_deg, s.spines.spines_per_module,
                s.current_a);
  return buf;
}

std::string summary_header() {
  return "scenario_id,angle_deg,target_diam_mm,spine_angle_deg,"
         "spines_per_module,current_a,seed,max_force_n,first_slip_n,"
         "detached\n";
}

std::string summary_row(const GraspScenario& s, const DetachmentTrace& t) {
  CsvRow row;
  row.add(scenario_id(s))
      .add(s.pull_angle_deg)
      .add(s.target.nominal_diameter_m * 1000.0)
      .add(s.spines.inclination_deg)
      .add_int(s.spines.spines_per_module)
      .add(s.current_a)
      .add_u64(s.seed)
      .add(t.max_force_n)
      .add(first_slip_cell(t.first_slip_force_n))
      .add_int(t.detached ? 1 : 0);
  return row.str();
}

std::string trace_header(std::size_t finger_count) {
  std::string header = "time_s,applied_force_n";
  for (std::size_t i = 0; i < finger_count; ++i) {
    header += ",finger" + std::to_string(i + 1) + "_load_n";
  }
  header += ",slip_count_cum\n";
  return header;
}

std::string trace_csv(const GraspScenario& s, const DetachmentTrace& t) {
  std::string out = trace_header(s.finger_azimuths_deg.size());
  for (const TraceSample& sample : t.samples) {
    CsvRow row;
    row.add(sample.time_s).add(sample.applied_force_n);
    for (double load : sample.finger_load_n) {
      row.add(load);
    }
    row.add_int(sample.slip_count_cum);
    out += row.str();
  }
  return out;
}

std::vector<GraspScenario> sweep_cells(const GraspScenario& base,
                                       const SweepAxes& axes) {
  std::vector<double> diameters = axes.target_diameters_m;
  std::vector<double> angles = axes.pull_angles_deg;
  std::vector<SpineInterface> interfaces = axes.interfaces;
  std::vector<double> currents = axes.currents_a;
  std::sort(diameters.begin(), diameters.end());
  std::sort(angles.begin(), angles.end());
  std::sort(interfaces.begin(), interfaces.end(),
            [](const SpineInterface& a, const SpineInterface& b) {
              if (a.inclination_deg != b.inclination_deg) {
                return a.inclination_deg < b.inclination_deg;
              }
              return a.spines_per_module < b.spines_per_module;
            });
  std::sort(currents.begin(), currents.end());

  std::vector<GraspScenario> cells;
  cells.reserve(diameters.size() * angles.size() * interfaces.size() *
                currents.size());
  std::uint64_t index = 0;
  for (double d : diameters) {
    for (double angle : angles) {
      for (const SpineInterface& iface : interfaces) {
        for (double current : currents) {
          GraspScenario cell = base;
          cell.target = make_sphere(d);
          cell.target.asperity = base.target.asperity;
          cell.pull_angle_deg = angle;
          cell.spines = iface;
          cell.current_a = current;
          cell.seed = base.seed +
                      index * static_cast<std::uint64_t>(axes.repetitions);
          ++index;
          cells.push_back(std::move(cell));
        }
      }
    }
  }
  return cells;
}

int cmd_pressure(const CommandOptions& opts, std::ostream& out,
                 std::ostream& err) {
  return run_guarded(err, [&] {
    const ScenarioConfig config = load_config(opts.config_path);
    const GraspScenario s = scenario_with_overrides(config, opts);
    const double tension =
        tether_tension(s.actuator, s.current_a,
                       static_cast<int>(s.finger_azimuths_deg.size()));
    const PressureProfile profile = pressure_profile(s.chain, tension);

    std::string csv = "phalanx_index,pressure_n_per_m\n";
    for (std::size_t j = 0; j < profile.pressure_n_per_m.size(); ++j) {
      CsvRow row;
      row.add_int(static_cast<long long>(j) + 1)
          .add(profile.pressure_n_per_m[j]);
      csv += row.str();
    }
    out << csv;
    if (!opts.out_dir.empty()) {
      write_file(prepare_out_dir(opts.out_dir, "pressure") / "pressure.csv",
                 csv);
    }
    return kExitOk;
  });
}

int cmd_detach(const CommandOptions& opts, std::ostream& out,
               std::ostream& err) {
  return run_guarded(err, [&] {
    const ScenarioConfig config = load_config(opts.config_path);
    const GraspScenario base = scenario_with_overrides(config, opts);
    const int reps = resolve_reps(opts, 1);
    const fs::path dir = prepare_out_dir(opts.out_dir, "detach");

    std::string summary = summary_header();
    for (int r = 0; r < reps; ++r) {
      GraspScenario run = base;
      run.seed = base.seed + static_cast<std::uint64_t>(r);
      const DetachmentTrace trace = simulate_detachment(run);
      summary += summary_row(run, trace);
      write_file(dir / ("trace_" + std::to_string(run.seed) + ".csv"),
                 trace_csv(run, trace));
    }
    write_file(dir / "summary.csv", summary);
    out << summary;
    return kExitOk;
  });
}

int cmd_sweep(const CommandOptions& opts, std::ostream& out,
              std::ostream& err) {
  return run_guarded(err, [&] {
    ScenarioConfig config = load_config(opts.config_path);
    if (!config.has_sweep) {
      throw config_error({"sweep requires a sweep block in the config"});
    }
    const GraspScenario base = scenario_with_overrides(config, opts);
    SweepAxes axes = config.sweep;
    axes.repetitions = resolve_reps(opts, axes.repetitions);

    const std::vector<GraspScenario> cells = sweep_cells(base, axes);
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      try {
        cells[i].validate();
      } catch (const std::exception& e) {
        violations.push_back("sweep cell " + scenario_id(cells[i]) + ": " +
                             e.what());
      }
    }
    if (!violations.empty()) {
      throw config_error(std::move(violations));
    }

    const fs::path dir = prepare_out_dir(opts.out_dir, "sweep");
    std::vector<SweepStats> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex fail_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) {
          return;
        }
        try {
          results[i] = monte_carlo(cells[i], axes.repetitions);
        } catch (...) {
          std::lock_guard<std::mutex> lock(fail_mutex);
          if (!failure) {
            failure = std::current_exception();
          }
        }
      }
    };
    const unsigned n_workers = resolve_workers(opts, cells.size());
    std::vector<std::thread> pool;
    pool.reserve(n_workers - 1);
    for (unsigned t = 1; t < n_workers; ++t) {
      pool.emplace_back(worker);
    }
    worker();
    for (std::thread& t : pool) {
      t.join();
    }
    if (failure) {
      std::rethrow_exception(failure);
    }

    std::string csv = "scenario_id,angle_deg,target_diam_mm,spine_angle_deg,"
                      "spines_per_module,current_a,seed,max_force_n,"
                      "first_slip_n,detached,mean_max_force_n,"
                      "std_max_force_n\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const GraspScenario& c = cells[i];
      const SweepStats& st = results[i];
      CsvRow row;
      row.add(scenario_id(c))
          .add(c.pull_angle_deg)
          .add(c.target.nominal_diameter_m * 1000.0)
          .add(c.spines.inclination_deg)
          .add_int(c.spines.spines_per_module)
          .add(c.current_a)
          .add_u64(c.seed)
          .add(st.max_max_force_n)
          .add(st.mean_first_slip_n > 0.0 ? format_g9(st.mean_first_slip_n)
                                          : std::string())
          .add(st.detach_fraction)
          .add(st.mean_max_force_n)
          .add(st.std_max_force_n);
      csv += row.str();
    }
    write_file(dir / "cells.csv", csv);
    out << csv;
    return kExitOk;
  });
}

int cmd_mission(const MissionOptions& opts, std::ostream& out,
                std::ostream& err) {
  return run_guarded(err, [&] {
    std::vector<std::string> violations;
    if (!(opts.mass_kg > 0.0)) {
      violations.push_back("mass must be > 0 kg");
    }
    if (opts.stance_legs < 1) {
      violations.push_back("stance legs must be >= 1");
    }
    double gravity = 0.0;
    if (opts.gravity == "moon") {
      gravity = 1.62;
    } else if (opts.gravity == "mars") {
      gravity = 3.71;
    } else if (opts.gravity == "earth") {
      gravity = 9.81;
    } else {
      char* end = nullptr;
      gravity = std::strtod(opts.gravity.c_str(), &end);
      if (opts.gravity.empty() || end == nullptr || *end != '\0') {
        violations.push_back("unknown body \"" + opts.gravity +
                             "\"; known bodies: moon, mars, earth "
                             "(or give m/s^2 as a number)");
      } else if (!(gravity > 0.0)) {
        violations.push_back("gravity must be > 0 m/s^2");
      }
    }
    if (opts.capability_mean_n.has_value() != opts.capability_std_n.has_value()) {
      violations.push_back(
          "capability mean and std must be supplied together");
    }
    if (opts.capability_std_n && !(*opts.capability_std_n > 0.0)) {
      violations.push_back("capability std must be > 0 N");
    }
    if (!violations.empty()) {
      throw config_error(std::move(violations));
    }

    const double required =
        required_grip_force(opts.mass_kg, gravity, opts.stance_legs);
    std::string report = "quantity,value\n";
    report += CsvRow().add("mass_kg").add(opts.mass_kg).str();
    report += CsvRow().add("gravity_m_per_s2").add(gravity).str();
    report += CsvRow().add("stance_legs").add_int(opts.stance_legs).str();
    report += CsvRow().add("required_force_n").add(required).str();
    if (opts.capability_mean_n) {
      const double margin =
          (*opts.capability_mean_n - required) / *opts.capability_std_n;
      report +=
          CsvRow().add("capability_mean_n").add(*opts.capability_mean_n).str();
      report +=
          CsvRow().add("capability_std_n").add(*opts.capability_std_n).str();
      report += CsvRow().add("margin_sigma").add(margin).str();
    }
    out << report;
    if (!opts.out_dir.empty()) {
      write_file(prepare_out_dir(opts.out_dir, "mission") / "mission.csv",
                 report);
    }
    return kExitOk;
  });
}

int cmd_calibrate(const CommandOptions& opts, std::ostream& out,
                  std::ostream& err) {
  return run_guarded(err, [&] {
    const ScenarioConfig config = load_config(opts.config_path);
    const GraspScenario base = scenario_with_overrides(config, opts);
    const int reps = resolve_reps(opts, 25);

    CalibrationBand band;
    if (config.has_sweep && !config.sweep.currents_a.empty()) {
      band.current_grid_a = config.sweep.currents_a;
      std::sort(band.current_grid_a.begin(), band.current_grid_a.end());
    }
    if (band.current_grid_a.empty()) {
      throw config_error({"calibrate: current grid is empty"});
    }
    for (double current : band.current_grid_a) {
      GraspScenario probe = base;
      probe.current_a = current;
      try {
        probe.validate();
      } catch (const std::exception& e) {
        throw config_error({"calibrate: current " + format_g9(current) +
                            " A: " + e.what()});
      }
    }

    const fs::path dir = prepare_out_dir(opts.out_dir, "calibrate");
    const CalibrationResult result = calibrate_relatch(band, base, reps);

    std::string window_csv =
        "relatch_low_n,relatch_high_n,relatch_rolloff_n,relatch_floor,"
        "converged\n";
    window_csv += CsvRow()
                      .add(result.window.low_n)
                      .add(result.window.high_n)
                      .add(result.window.rolloff_n)
                      .add(result.window.floor)
                      .add_int(result.converged ? 1 : 0)
                      .str();
    std::string curve_csv = "current_a,mean_max_force_n\n";
    for (std::size_t j = 0; j < result.current_grid_a.size(); ++j) {
      curve_csv += CsvRow()
                       .add(result.current_grid_a[j])
                       .add(result.mean_max_force_n[j])
                       .str();
    }
    write_file(dir / "window.csv", window_csv);
    write_file(dir / "current_response.csv", curve_csv);
    out << window_csv << curve_csv;
    return kExitOk;
  });
}

}  // namespace gripsim
