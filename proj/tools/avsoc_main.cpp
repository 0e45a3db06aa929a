// avsoc command-line tool: validate the fuzzy engine, run single
// simulations, execute the built-in experiment sweeps, and join raw results
// into reports.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "avsoc/cli.hpp"

namespace {

void add_world_flags(CLI::App* cmd, avsoc::WorldConfig& cfg) {
  cmd->add_option("--num-avs", cfg.num_avs, "number of vehicles [1-30]");
  cmd->add_option("--vehicle-ratio", cfg.vehicle_ratio, "trucks:cars ratio r in r:1 (2, 3 or 4)");
  cmd->add_option("--min-velocity", cfg.min_velocity, "lower velocity bound [0-1]");
  cmd->add_option("--max-velocity", cfg.max_velocity, "upper velocity bound [0-1]");
  cmd->add_option("--acceleration-rate", cfg.acceleration_rate, "acceleration step [0-1]");
  cmd->add_option("--deceleration-rate", cfg.deceleration_rate, "deceleration step [0-1]");
  cmd->add_option("--safety-distance", cfg.safety_distance, "desired separation, patches [1-10]");
  cmd->add_option("--sonar-range", cfg.sonar_range, "sensing radius, patches [1-10]");
  cmd->add_option("--li", cfg.li, "likelihood slider constant [0-1]");
  cmd->add_option("--ud", cfg.ud, "undesirability slider constant [0-1]");
  cmd->add_option("--ig", cfg.ig, "Ig slider constant [0-1]");
  cmd->add_option("--world-size", cfg.world_size, "torus side length, patches");
  cmd->add_option("--collision-radius", cfg.collision_radius, "collision threshold, patches");
  cmd->add_flag("--dynamic-appraisal", cfg.dynamic_appraisal,
                "drive the fuzzy legs from beliefs instead of sliders");
  cmd->add_option("--fear-threshold", cfg.fear.threshold, "fear threshold [0-1]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"artificial society of autonomous vehicles: fuzzy fear, social norms, collision sweeps"};
  app.require_subcommand(1);

  // Pre-scan for --config so file values become defaults that explicit
  // flags then override during parsing.
  std::string run_config_file;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      run_config_file = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      run_config_file = arg.substr(9);
  }

  // validate-fuzzy
  avsoc::cli::ValidateFuzzyOptions validate_opt;
  CLI::App* validate = app.add_subcommand(
      "validate-fuzzy", "check the undesirability system against its validation table");
  validate->add_flag("--calibrate", validate_opt.run_calibration,
                     "re-derive membership peaks before validating");

  // run
  avsoc::cli::RunOptions run_opt;
  std::string run_mode;
  int run_ticks = -1;
  if (!run_config_file.empty()) {
    try {
      auto file = avsoc::io::parse_kv(avsoc::io::read_text_file(run_config_file));
      avsoc::apply_world_config_keys(file.globals, run_opt.cfg);
    } catch (const avsoc::config_error& e) {
      std::cerr << "config error (" << e.key() << "): " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  CLI::App* run = app.add_subcommand("run", "execute a single simulation run");
  std::string config_sink;  // consumed by the pre-scan above
  run->add_option("--config", config_sink, "world config file (key = value lines)");
  add_world_flags(run, run_opt.cfg);
  run->add_option("--mode", run_mode, "norms | random-walk")
      ->check(CLI::IsMember({"norms", "random-walk", "random_walk"}));
  run->add_option("--ticks", run_ticks, "tick count (default from config)");
  run->add_option("--seed", run_opt.seed, "rng seed");
  run->add_flag("--trace", run_opt.trace, "write per-tick trace CSVs");
  run->add_option("--out", run_opt.out_dir, "output directory (default $AVSOC_OUT or ./out)");

  // sweep
  avsoc::cli::SweepOptions sweep_opt;
  std::uint64_t sweep_seed_flag = 0;
  int sweep_ticks = -1;
  CLI::App* sweep = app.add_subcommand("sweep", "run a built-in or custom experiment sweep");
  sweep->add_option("--set", sweep_opt.set, "a1..a5, b1..b5, a1.sonar2, ..., or all");
  sweep->add_option("--spec", sweep_opt.spec_file, "custom experiment spec file");
  sweep->add_option("--jobs", sweep_opt.jobs, "worker threads (default 1)");
  CLI::Option* seed_opt = sweep->add_option("--base-seed", sweep_seed_flag, "sweep base seed");
  sweep->add_option("--ticks", sweep_ticks, "ticks per run override");
  sweep->add_option("--out", sweep_opt.out_dir, "output directory");

  // report
  avsoc::cli::ReportOptions report_opt;
  CLI::App* report = app.add_subcommand("report", "join raw sweep CSVs into summaries and reports");
  report->add_option("--out", report_opt.out_dir, "output directory holding raw/");
  report->add_option("--sets", report_opt.sets, "comma list of required sets (default all)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return avsoc::cli::cmd_validate_fuzzy(validate_opt, std::cout, std::cerr);
    if (*run) {
      if (!run_mode.empty())
        run_opt.cfg.metacognition = (run_mode == "norms");
      if (run_ticks >= 0) run_opt.ticks = run_ticks;
      return avsoc::cli::cmd_run(run_opt, std::cout, std::cerr);
    }
    if (*sweep) {
      if (*seed_opt) sweep_opt.base_seed = sweep_seed_flag;
      if (sweep_ticks >= 0) sweep_opt.ticks = sweep_ticks;
      return avsoc::cli::cmd_sweep(sweep_opt, std::cout, std::cerr);
    }
    if (*report) return avsoc::cli::cmd_report(report_opt, std::cout, std::cerr);
  } catch (const avsoc::config_error& e) {
    std::cerr << "config error (" << e.key() << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
