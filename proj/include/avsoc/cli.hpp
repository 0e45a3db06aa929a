// cli.hpp : the command implementations behind the avsoc tool. Each command
// returns a process exit status; machine-readable results go to `out`,
// diagnostics to `err`, files under the output directory (raw/, summary/,
// report/ subdirectories).
#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "avsoc/experiments.hpp"
#include "avsoc/fuzzy.hpp"
#include "avsoc/society.hpp"

namespace avsoc::cli {

namespace fs = std::filesystem;

inline std::string default_out_dir() {
  if (const char* env = std::getenv("AVSOC_OUT")) return env;
  return "out";
}

// ---------------------------------------------------------------------------
// validate-fuzzy
// ---------------------------------------------------------------------------

struct ValidateFuzzyOptions {
  bool run_calibration = false;  // re-derive peaks instead of the frozen set
};

/// Evaluates the 14 undesirability validation rows. Exit 0 iff
/// every row matches its token label and its crisp value within +/-0.1.
inline int cmd_validate_fuzzy(const ValidateFuzzyOptions& opt, std::ostream& out,
                              std::ostream& err) {
  fuzzy::PeakSet peaks = fuzzy::kCalibratedPeaks;
  if (opt.run_calibration) {
    try {
      auto constraints = fuzzy::validation_constraints();
      auto rules = fuzzy::rule_table(fuzzy::kUndesirabilityRules);
      auto result = fuzzy::calibrate_membership_peaks(
          fuzzy::kIntensityScale, constraints, fuzzy::kUndesirabilityValidation, &rules);
      peaks = result.peaks;
      err << "calibration: peaks";
      for (double p : peaks) err << " " << p;
      err << " max_error " << result.max_error << "\n";
    } catch (const fuzzy::calibration_error& e) {
      err << "calibration failed: " << e.what() << "\n";
      return 1;
    }
  }
  auto fis = fuzzy::build_undesirability_fis(peaks);
  auto outcomes = fuzzy::run_undesirability_validation(fis);
  bool all_ok = true;
  out << "test,imp_goal,ach_goal,expected,expected_token,actual,actual_token,value_ok,token_ok\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& row = fuzzy::kUndesirabilityValidation[i];
    const auto& o = outcomes[i];
    all_ok = all_ok && o.ok();
    out << (i + 1) << "," << io::format_double(row.imp_goal) << ","
        << io::format_double(row.ach_goal) << "," << io::format_double(row.expected) << ","
        << fis.output().tokens[row.expected_token].name << "," << io::format_double(o.actual)
        << "," << fis.output().tokens[o.actual_token].name << "," << (o.value_ok ? 1 : 0)
        << "," << (o.token_ok ? 1 : 0) << "\n";
  }
  err << (all_ok ? "validate-fuzzy: 14/14 rows pass\n" : "validate-fuzzy: FAILURES\n");
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunOptions {
  WorldConfig cfg;
  std::optional<int> ticks;  // defaults to cfg.ticks_per_run
  std::uint64_t seed = 42;
  bool trace = false;
  std::string out_dir = default_out_dir();
};

/// Executes one simulation run; writes run.csv (per-tick collision series)
/// plus trace.csv / fear_trace.csv when tracing, and echoes the total.
inline int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    opt.cfg.validate();
  } catch (const config_error& e) {
    err << "config error (" << e.key() << "): " << e.what() << "\n";
    return 1;
  }
  Trace trace;
  int ticks = opt.ticks.value_or(opt.cfg.ticks_per_run);
  RunResult result =
      run_simulation(opt.cfg, ticks, opt.seed, opt.trace ? &trace : nullptr);

  std::string csv = "tick,collisions,cumulative\n";
  long cumulative = 0;
  for (std::size_t t = 0; t < result.per_tick.size(); ++t) {
    cumulative += result.per_tick[t];
    csv += std::to_string(t) + "," + std::to_string(result.per_tick[t]) + "," +
           std::to_string(cumulative) + "\n";
  }
  io::write_text_file(fs::path(opt.out_dir) / "run.csv", csv);
  if (opt.trace) {
    io::write_text_file(fs::path(opt.out_dir) / "trace.csv", agent_trace_csv(trace));
    io::write_text_file(fs::path(opt.out_dir) / "fear_trace.csv", fear_trace_csv(trace));
  }
  out << result.total_collisions << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
  std::string set = "all";     // built-in set name, ignored when spec_file given
  std::string spec_file;       // custom experiment spec file
  int jobs = 1;
  std::optional<std::uint64_t> base_seed;
  std::optional<int> ticks;
  std::string out_dir = default_out_dir();
};

/// Runs the selected sweeps and writes raw + summary CSVs per sub-sweep.
inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<ExperimentSpec> specs;
  try {
    if (!opt.spec_file.empty())
      specs = parse_experiment_file(io::read_text_file(opt.spec_file));
    else
      specs = find_experiment_specs(opt.set);
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << "\n";
    return 1;
  }
  for (auto& spec : specs) {
    if (opt.base_seed) spec.base_seed = *opt.base_seed;
    if (opt.ticks) spec.ticks = *opt.ticks;
    try {
      auto t0 = std::chrono::steady_clock::now();
      SweepSummary summary = run_sweep(spec, opt.jobs);
      auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
      std::string file_label = spec.label;
      for (auto& ch : file_label)
        if (ch == '.') ch = '_';
      io::write_text_file(fs::path(opt.out_dir) / "raw" / (file_label + ".csv"),
                          raw_csv(summary, spec.ticks));
      io::write_text_file(fs::path(opt.out_dir) / "summary" / (file_label + ".csv"),
                          summary_csv(summary));
      err << "sweep " << spec.label << ": " << summary.rows.size() << " rows x "
          << spec.repetitions << " reps in " << io::format_double(dt.count()) << " s\n";
      out << summary_csv(summary);
    } catch (const config_error& e) {
      err << "sweep " << spec.label << " config error (" << e.key() << "): " << e.what()
          << "\n";
      return 1;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportOptions {
  std::string out_dir = default_out_dir();
  std::string sets = "all";  // comma list of set ids that must be present
};

namespace detail {

/// The matrix cells and the norms sub-sweep each one comes from.
inline const std::vector<std::pair<std::pair<int, int>, std::string>>& matrix_cell_sources() {
  static const std::vector<std::pair<std::pair<int, int>, std::string>> cells{
      {{1, 1}, "b5"},        {{2, 2}, "b3"},        {{2, 5}, "b2.sonar5"},
      {{3, 2}, "b1.sonar2"}, {{3, 3}, "b4"},        {{3, 5}, "b1.sonar5"},
  };
  return cells;
}

}  // namespace detail

/// Joins existing raw CSVs into summaries, A-vs-B comparisons, plot data and
/// the sonar/safety matrix. Raw files that the requested set list needs but
/// that are absent produce a nonzero exit naming each missing file.
inline int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err) {
  fs::path raw_dir = fs::path(opt.out_dir) / "raw";
  auto specs = builtin_experiment_specs();
  std::vector<std::string> wanted_labels;
  if (opt.sets == "all") {
    for (const auto& spec : specs) wanted_labels.push_back(spec.label);
  } else {
    for (const auto& name : io::split(opt.sets, ',')) {
      bool known = false;
      for (const auto& spec : specs) {
        if (spec.set_id == name || spec.label == name) {
          wanted_labels.push_back(spec.label);
          known = true;
        }
      }
      if (!known) {
        err << "report: unknown set '" << name << "'\n";
        return 1;
      }
    }
  }
  std::vector<std::string> missing;
  std::vector<RawCsvRow> raw_rows;
  for (const auto& label : wanted_labels) {
    std::string file_label = label;
    for (auto& ch : file_label)
      if (ch == '.') ch = '_';
    fs::path path = raw_dir / (file_label + ".csv");
    if (!fs::exists(path)) {
      missing.push_back(path.string());
      continue;
    }
    auto rows = parse_raw_csv(io::read_text_file(path));
    raw_rows.insert(raw_rows.end(), rows.begin(), rows.end());
  }
  if (!missing.empty()) {
    err << "report: missing raw files:\n";
    for (const auto& m : missing) err << "  " << m << "\n";
    return 1;
  }

  std::vector<SweepSummary> summaries = summaries_from_raw(raw_rows);
  auto find_summary = [&](const std::string& label) -> const SweepSummary* {
    for (const auto& s : summaries)
      if (s.label == label) return &s;
    return nullptr;
  };

  for (const auto& summary : summaries) {
    std::string file_label = summary.label;
    for (auto& ch : file_label)
      if (ch == '.') ch = '_';
    io::write_text_file(fs::path(opt.out_dir) / "summary" / (file_label + ".csv"),
                        summary_csv(summary));
  }

  // A-vs-B comparison per matched pair.
  std::string comparisons;
  bool first_pair = true;
  bool all_pass = true;
  for (const auto& summary : summaries) {
    if (summary.label.empty() || summary.label[0] != 'a') continue;
    std::string b_label = "b" + summary.label.substr(1);
    const SweepSummary* b = find_summary(b_label);
    if (!b) continue;
    ComparisonReport report = compare_modes(summary, *b);
    all_pass = all_pass && report.all_pass;
    std::string csv = comparison_csv(report);
    if (!first_pair) {
      auto nl = csv.find('\n');
      csv = csv.substr(nl + 1);  // drop repeated header
    }
    comparisons += csv;
    first_pair = false;

    std::string pair_label = summary.label.substr(1);
    for (auto& ch : pair_label)
      if (ch == '.') ch = '_';
    io::write_text_file(fs::path(opt.out_dir) / "report" / ("plot_set" + pair_label + ".csv"),
                        plot_csv(summary, *b));
  }
  if (!comparisons.empty()) {
    io::write_text_file(fs::path(opt.out_dir) / "report" / "comparison.csv", comparisons);
    out << comparisons;
    err << (all_pass ? "report: all mode comparisons pass\n"
                     : "report: some mode comparisons FAIL\n");
  }

  // Sonar/safety matrix from the designated norms sub-sweeps.
  std::vector<MatrixSource> sources;
  bool matrix_complete = true;
  for (const auto& [cell, label] : detail::matrix_cell_sources()) {
    const SweepSummary* s = find_summary(label);
    if (!s) {
      matrix_complete = false;
      continue;
    }
    sources.push_back({cell.first, cell.second, s});
  }
  if (matrix_complete) {
    SonarSafetyMatrix matrix = sonar_safety_matrix(sources);
    io::write_text_file(fs::path(opt.out_dir) / "report" / "sonar_safety_matrix.csv",
                        matrix_csv(matrix));
    out << matrix_csv(matrix);
    err << "report: matrix flag high_safety_low_sonar_worst="
        << (matrix.high_safety_low_sonar_worst ? "true" : "false") << "\n";
  } else if (opt.sets == "all") {
    err << "report: matrix sources incomplete\n";
    return 1;
  }
  return 0;
}

}  // namespace avsoc::cli
