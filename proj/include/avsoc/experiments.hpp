// experiments.hpp : behavior-space style sweep harness. Runs the built-in
// experiment sets (five random-walk sets, five norms sets, identical
// parameters) with seeded repetitions, aggregates collision statistics, and
// derives the mode comparison and the sonar/safety matrix.
//
// Seeds are base_seed + row_index * 1000 + rep, so every run in a sweep has
// a distinct seed and matched rows across sweeps share seeds. Runs are
// independent; any level of parallelism yields identical output because
// results are slotted by (row, rep) before aggregation.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "avsoc/io.hpp"
#include "avsoc/society.hpp"

namespace avsoc {

class shape_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { RandomWalk, Norms };

inline constexpr std::string_view mode_name(Mode m) {
  return m == Mode::RandomWalk ? "random_walk" : "norms";
}

inline Mode mode_from_name(const std::string& s) {
  if (s == "random_walk" || s == "random-walk") return Mode::RandomWalk;
  if (s == "norms") return Mode::Norms;
  throw config_error("mode", "unknown mode '" + s + "'");
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

inline double mean(std::span<const long> xs) {
  double sum = 0.0;
  for (long x : xs) sum += static_cast<double>(x);
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

/// Sample standard deviation (n-1 denominator); zero for fewer than two
/// observations.
inline double sample_stdev(std::span<const long> xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double ss = 0.0;
  for (long x : xs) {
    double d = static_cast<double>(x) - m;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// ---------------------------------------------------------------------------
// Single runs
// ---------------------------------------------------------------------------

struct RunResult {
  long total_collisions = 0;
  std::vector<int> per_tick;
};

/// Spawns a society and steps it `ticks` times. Validates the configuration
/// before any tick runs; deterministic for a given (config, seed).
inline RunResult run_simulation(const WorldConfig& cfg, int ticks, std::uint64_t seed,
                                Trace* trace = nullptr) {
  cfg.validate();
  World world = spawn_society(cfg, seed);
  world.trace = trace;
  RunResult result;
  result.per_tick.reserve(ticks);
  for (int t = 0; t < ticks; ++t) {
    TickReport report = step(world);
    result.per_tick.push_back(report.collisions);
    result.total_collisions += report.collisions;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct ExperimentRow {
  int experiment_no = 0;  // 1-based row number within its experiment set
  WorldConfig cfg;
};

struct ExperimentSpec {
  std::string label;   // e.g. "a1.sonar2"; the `set` column of raw output
  std::string set_id;  // e.g. "a1"
  Mode mode = Mode::RandomWalk;
  int repetitions = 7;
  std::uint64_t base_seed = 42;
  int ticks = 1000;
  std::vector<ExperimentRow> rows;
};

inline std::uint64_t sweep_seed(std::uint64_t base_seed, int row_index, int rep) {
  return base_seed + static_cast<std::uint64_t>(row_index) * 1000 +
         static_cast<std::uint64_t>(rep);
}

struct SweepRow {
  int experiment_no = 0;
  int num_avs = 0;
  Mode mode = Mode::RandomWalk;
  double mean_collisions = 0.0;
  double stdev_collisions = 0.0;
  std::vector<long> totals;  // one per repetition, rep order
  std::vector<std::uint64_t> seeds;
};

struct SweepSummary {
  std::string label;
  std::string set_id;
  Mode mode = Mode::RandomWalk;
  std::vector<SweepRow> rows;
};

/// Runs rows x repetitions simulations. Rows are validated up front so a bad
/// configuration aborts before any run, naming the offending row. `jobs`
/// sets the number of worker threads; aggregation order is fixed by
/// (row, rep), so the summary is identical at any parallelism level.
inline SweepSummary run_sweep(const ExperimentSpec& spec, int jobs = 1) {
  for (std::size_t i = 0; i < spec.rows.size(); ++i) {
    try {
      spec.rows[i].cfg.validate();
    } catch (const config_error& e) {
      throw config_error(e.key(), spec.label + " row " +
                                       std::to_string(spec.rows[i].experiment_no) +
                                       ": " + e.what());
    }
  }
  const int reps = spec.repetitions;
  const std::size_t tasks = spec.rows.size() * static_cast<std::size_t>(reps);
  std::vector<long> totals(tasks, 0);

  auto run_task = [&](std::size_t task) {
    std::size_t row = task / reps;
    int rep = static_cast<int>(task % reps);
    std::uint64_t seed = sweep_seed(spec.base_seed, static_cast<int>(row), rep);
    totals[task] =
        run_simulation(spec.rows[row].cfg, spec.ticks, seed).total_collisions;
  };

  if (jobs <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (;;) {
        std::size_t t = next.fetch_add(1);
        if (t >= tasks) return;
        try {
          run_task(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    int n = std::min<std::size_t>(jobs, tasks);
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  SweepSummary summary;
  summary.label = spec.label;
  summary.set_id = spec.set_id;
  summary.mode = spec.mode;
  summary.rows.reserve(spec.rows.size());
  for (std::size_t r = 0; r < spec.rows.size(); ++r) {
    SweepRow row;
    row.experiment_no = spec.rows[r].experiment_no;
    row.num_avs = spec.rows[r].cfg.num_avs;
    row.mode = spec.mode;
    for (int rep = 0; rep < reps; ++rep) {
      row.totals.push_back(totals[r * reps + rep]);
      row.seeds.push_back(sweep_seed(spec.base_seed, static_cast<int>(r), rep));
    }
    row.mean_collisions = mean(row.totals);
    row.stdev_collisions = sample_stdev(row.totals);
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

// ---------------------------------------------------------------------------
// Mode comparison
// ---------------------------------------------------------------------------

struct ComparisonRow {
  int num_avs = 0;
  double mean_a = 0.0;  // random-walk side
  double mean_b = 0.0;  // norms side
  double delta = 0.0;   // mean_a - mean_b
  double ratio = 0.0;   // mean_a / mean_b
  bool pass = false;    // mean_b strictly below mean_a
};

struct ComparisonReport {
  std::string label_a, label_b;
  std::vector<ComparisonRow> rows;
  bool all_pass = false;
};

inline ComparisonReport compare_modes(const SweepSummary& a, const SweepSummary& b) {
  if (a.rows.size() != b.rows.size())
    throw shape_error("compare_modes: summaries have different row counts");
  ComparisonReport report;
  report.label_a = a.label;
  report.label_b = b.label;
  report.all_pass = true;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].num_avs != b.rows[i].num_avs)
      throw shape_error("compare_modes: num_avs mismatch at row " + std::to_string(i));
    ComparisonRow row;
    row.num_avs = a.rows[i].num_avs;
    row.mean_a = a.rows[i].mean_collisions;
    row.mean_b = b.rows[i].mean_collisions;
    row.delta = row.mean_a - row.mean_b;
    row.ratio = row.mean_b > 0.0
                    ? row.mean_a / row.mean_b
                    : std::numeric_limits<double>::infinity();
    row.pass = row.mean_b < row.mean_a;
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sonar/safety matrix
// ---------------------------------------------------------------------------

struct MatrixSource {
  int safety_distance;
  int sonar_range;
  const SweepSummary* summary;
};

struct SonarSafetyMatrix {
  std::vector<int> av_counts;
  struct Row {
    int safety_distance;
    int sonar_range;
    std::string label;
    std::vector<double> means;  // aligned with av_counts
  };
  std::vector<Row> rows;  // sorted by (safety, sonar)
  // True when (3,2) exceeds both (3,3) and (2,2) at every AV count.
  bool high_safety_low_sonar_worst = false;
};

/// Builds the matrix over the six expected (safety, sonar) configurations.
/// Missing or duplicated cells are shape errors.
inline SonarSafetyMatrix sonar_safety_matrix(std::span<const MatrixSource> sources) {
  static constexpr std::array<std::pair<int, int>, 6> kCells{
      {{1, 1}, {2, 2}, {2, 5}, {3, 2}, {3, 3}, {3, 5}}};
  std::map<std::pair<int, int>, const SweepSummary*> by_cell;
  for (const auto& src : sources) {
    auto key = std::make_pair(src.safety_distance, src.sonar_range);
    if (by_cell.count(key))
      throw shape_error("sonar_safety_matrix: duplicate cell (" +
                        std::to_string(key.first) + "," + std::to_string(key.second) + ")");
    by_cell[key] = src.summary;
  }
  std::string missing;
  for (const auto& cell : kCells) {
    if (!by_cell.count(cell))
      missing += " (" + std::to_string(cell.first) + "," + std::to_string(cell.second) + ")";
  }
  if (!missing.empty())
    throw shape_error("sonar_safety_matrix: missing cells:" + missing);

  SonarSafetyMatrix matrix;
  const SweepSummary* first = by_cell.begin()->second;
  for (const auto& row : first->rows) matrix.av_counts.push_back(row.num_avs);
  for (const auto& cell : kCells) {
    const SweepSummary* summary = by_cell.at(cell);
    if (summary->rows.size() != matrix.av_counts.size())
      throw shape_error("sonar_safety_matrix: row count mismatch in " + summary->label);
    SonarSafetyMatrix::Row row;
    row.safety_distance = cell.first;
    row.sonar_range = cell.second;
    row.label = summary->label;
    for (std::size_t i = 0; i < summary->rows.size(); ++i) {
      if (summary->rows[i].num_avs != matrix.av_counts[i])
        throw shape_error("sonar_safety_matrix: num_avs mismatch in " + summary->label);
      row.means.push_back(summary->rows[i].mean_collisions);
    }
    matrix.rows.push_back(std::move(row));
  }

  auto row_of = [&](int safety, int sonar) -> const SonarSafetyMatrix::Row& {
    for (const auto& r : matrix.rows)
      if (r.safety_distance == safety && r.sonar_range == sonar) return r;
    throw shape_error("sonar_safety_matrix: internal lookup failure");
  };
  const auto& r32 = row_of(3, 2);
  const auto& r33 = row_of(3, 3);
  const auto& r22 = row_of(2, 2);
  matrix.high_safety_low_sonar_worst = true;
  for (std::size_t i = 0; i < matrix.av_counts.size(); ++i)
    matrix.high_safety_low_sonar_worst = matrix.high_safety_low_sonar_worst &&
                                         r32.means[i] > r33.means[i] &&
                                         r32.means[i] > r22.means[i];
  return matrix;
}

// ---------------------------------------------------------------------------
// Built-in experiment sets
// ---------------------------------------------------------------------------

namespace detail {

struct SetParams {
  int set_no;
  double max_velocity, acceleration, deceleration;
  int safety_distance;
  std::array<int, 2> sonars;  // second entry 0 when the set has one sonar value
};

inline constexpr std::array<SetParams, 5> kBuiltinSets{{
    {1, 0.8, 0.1, 0.1, 3, {2, 5}},
    {2, 0.5, 0.2, 0.2, 2, {2, 5}},
    {3, 0.3, 0.1, 0.1, 2, {2, 0}},
    {4, 0.3, 0.3, 0.3, 3, {3, 0}},
    {5, 0.3, 0.1, 0.1, 1, {1, 0}},
}};

inline constexpr std::array<int, 5> kAvCounts{10, 15, 20, 25, 30};

inline ExperimentSpec make_builtin_spec(const SetParams& set, Mode mode, int sonar,
                                      bool multi_sonar) {
  ExperimentSpec spec;
  spec.set_id = (mode == Mode::RandomWalk ? "a" : "b") + std::to_string(set.set_no);
  spec.label = multi_sonar ? spec.set_id + ".sonar" + std::to_string(sonar) : spec.set_id;
  spec.mode = mode;
  int no = 1;
  for (int n : kAvCounts) {
    ExperimentRow row;
    row.experiment_no = no++;
    row.cfg.num_avs = n;
    row.cfg.min_velocity = 0.14;
    row.cfg.max_velocity = set.max_velocity;
    row.cfg.acceleration_rate = set.acceleration;
    row.cfg.deceleration_rate = set.deceleration;
    row.cfg.safety_distance = set.safety_distance;
    row.cfg.sonar_range = sonar;
    row.cfg.metacognition = mode == Mode::Norms;
    row.cfg.li = 0.1;
    row.cfg.ud = 0.1;
    row.cfg.ig = 1.0;
    spec.rows.push_back(std::move(row));
  }
  return spec;
}

}  // namespace detail

/// All built-in sweeps: sets 1-5 in random-walk (a) and norms (b) modes, with
/// "sonar 2, 5" sets expanded into one sub-sweep per sonar value.
inline std::vector<ExperimentSpec> builtin_experiment_specs() {
  std::vector<ExperimentSpec> specs;
  for (Mode mode : {Mode::RandomWalk, Mode::Norms}) {
    for (const auto& set : detail::kBuiltinSets) {
      bool multi = set.sonars[1] != 0;
      specs.push_back(detail::make_builtin_spec(set, mode, set.sonars[0], multi));
      if (multi) specs.push_back(detail::make_builtin_spec(set, mode, set.sonars[1], multi));
    }
  }
  return specs;
}

/// Specs whose set id or label matches `name` ("a1", "b3.sonar2", "all", ...).
inline std::vector<ExperimentSpec> find_experiment_specs(const std::string& name) {
  std::vector<ExperimentSpec> out;
  for (auto& spec : builtin_experiment_specs()) {
    if (name == "all" || spec.set_id == name || spec.label == name)
      out.push_back(std::move(spec));
  }
  if (out.empty()) throw config_error("set", "unknown experiment set '" + name + "'");
  return out;
}

// ---------------------------------------------------------------------------
// Spec files
// ---------------------------------------------------------------------------

namespace detail {

inline double kv_double(const io::KvSection& s, const std::string& key, double fallback) {
  const std::string* v = s.find(key);
  if (!v) return fallback;
  try {
    return std::stod(*v);
  } catch (...) {
    throw config_error(key, "invalid number '" + *v + "' for " + key);
  }
}

inline int kv_int(const io::KvSection& s, const std::string& key, int fallback) {
  const std::string* v = s.find(key);
  if (!v) return fallback;
  try {
    return std::stoi(*v);
  } catch (...) {
    throw config_error(key, "invalid integer '" + *v + "' for " + key);
  }
}

inline bool kv_bool(const io::KvSection& s, const std::string& key, bool fallback) {
  const std::string* v = s.find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "on" || *v == "1") return true;
  if (*v == "false" || *v == "off" || *v == "0") return false;
  throw config_error(key, "invalid boolean '" + *v + "' for " + key);
}

inline int parse_ratio(const std::string& v) {
  auto parts = io::split(v, ':');
  if (parts.size() == 2 && parts[1] != "1")
    throw config_error("vehicle_ratio", "vehicle_ratio must be r:1");
  try {
    return std::stoi(parts[0]);
  } catch (...) {
    throw config_error("vehicle_ratio", "invalid ratio '" + v + "'");
  }
}

}  // namespace detail

/// Applies the known world-config keys of a section; unknown keys are
/// rejected. `skip` lists keys owned by the caller (e.g. sonar lists).
inline void apply_world_config_keys(const io::KvSection& section, WorldConfig& cfg,
                                    std::span<const std::string_view> skip = {}) {
  static const std::set<std::string> known{
      "num_avs", "vehicle_ratio", "min_velocity", "max_velocity",
      "acceleration_rate", "deceleration_rate", "safety_distance", "sonar_range",
      "metacognition", "li", "ud", "ig", "world_size", "ticks_per_run",
      "collision_radius", "dynamic_appraisal", "fear_threshold", "fear_combiner"};
  for (const auto& [key, value] : section.entries) {
    bool skipped = false;
    for (auto s : skip) skipped = skipped || key == s;
    if (skipped) continue;
    if (!known.count(key)) throw config_error(key, "unknown key '" + key + "'");
  }
  cfg.num_avs = detail::kv_int(section, "num_avs", cfg.num_avs);
  if (const std::string* v = section.find("vehicle_ratio"))
    cfg.vehicle_ratio = detail::parse_ratio(*v);
  cfg.min_velocity = detail::kv_double(section, "min_velocity", cfg.min_velocity);
  cfg.max_velocity = detail::kv_double(section, "max_velocity", cfg.max_velocity);
  cfg.acceleration_rate =
      detail::kv_double(section, "acceleration_rate", cfg.acceleration_rate);
  cfg.deceleration_rate =
      detail::kv_double(section, "deceleration_rate", cfg.deceleration_rate);
  cfg.safety_distance = detail::kv_int(section, "safety_distance", cfg.safety_distance);
  bool skip_sonar = false;
  for (auto s : skip) skip_sonar = skip_sonar || s == std::string_view("sonar_range");
  if (!skip_sonar) cfg.sonar_range = detail::kv_int(section, "sonar_range", cfg.sonar_range);
  cfg.metacognition = detail::kv_bool(section, "metacognition", cfg.metacognition);
  cfg.li = detail::kv_double(section, "li", cfg.li);
  cfg.ud = detail::kv_double(section, "ud", cfg.ud);
  cfg.ig = detail::kv_double(section, "ig", cfg.ig);
  cfg.world_size = detail::kv_double(section, "world_size", cfg.world_size);
  cfg.ticks_per_run = detail::kv_int(section, "ticks_per_run", cfg.ticks_per_run);
  cfg.collision_radius =
      detail::kv_double(section, "collision_radius", cfg.collision_radius);
  cfg.dynamic_appraisal =
      detail::kv_bool(section, "dynamic_appraisal", cfg.dynamic_appraisal);
  cfg.fear.threshold = detail::kv_double(section, "fear_threshold", cfg.fear.threshold);
  if (const std::string* v = section.find("fear_combiner")) {
    if (*v == "mean") cfg.fear.combiner = FearCombiner::ArithmeticMean;
    else if (*v == "min") cfg.fear.combiner = FearCombiner::Min;
    else if (*v == "product") cfg.fear.combiner = FearCombiner::Product;
    else throw config_error("fear_combiner", "unknown combiner '" + *v + "'");
  }
}

/// Parses an experiment spec file: global keys (set, mode, repetitions,
/// base_seed, ticks) followed by one [experiment] section per row. A
/// sonar_range list like "2, 5" expands into one sub-sweep spec per value.
inline std::vector<ExperimentSpec> parse_experiment_file(const std::string& text) {
  io::KvFile file = io::parse_kv(text);
  const std::string* set = file.globals.find("set");
  if (!set) throw config_error("set", "experiment file missing 'set'");
  Mode mode = mode_from_name(file.globals.find("mode") ? *file.globals.find("mode")
                                                       : "random_walk");
  int repetitions = detail::kv_int(file.globals, "repetitions", 7);
  std::uint64_t base_seed =
      static_cast<std::uint64_t>(detail::kv_int(file.globals, "base_seed", 42));
  int ticks = detail::kv_int(file.globals, "ticks", 1000);
  if (file.sections.empty())
    throw config_error("experiment", "experiment file has no [experiment] sections");

  std::vector<int> sonars;
  std::vector<ExperimentRow> template_rows;
  for (const auto& section : file.sections) {
    if (section.name != "experiment")
      throw config_error(section.name, "unknown section [" + section.name + "]");
    ExperimentRow row;
    row.experiment_no = detail::kv_int(section, "no",
                                       static_cast<int>(template_rows.size()) + 1);
    row.cfg.metacognition = mode == Mode::Norms;
    static constexpr std::array<std::string_view, 2> kSkip{"no", "sonar_range"};
    apply_world_config_keys(section, row.cfg, kSkip);
    std::vector<int> values;
    if (const std::string* v = section.find("sonar_range")) {
      for (const auto& item : io::split(*v, ',')) {
        try {
          values.push_back(std::stoi(item));
        } catch (...) {
          throw config_error("sonar_range", "invalid sonar_range '" + *v + "'");
        }
      }
    } else {
      values.push_back(row.cfg.sonar_range);
    }
    if (sonars.empty()) sonars = values;
    else if (sonars != values)
      throw config_error("sonar_range", "sonar_range must be identical across rows");
    template_rows.push_back(std::move(row));
  }

  std::vector<ExperimentSpec> specs;
  bool multi = sonars.size() > 1;
  for (int sonar : sonars) {
    ExperimentSpec spec;
    spec.set_id = *set;
    spec.label = multi ? *set + ".sonar" + std::to_string(sonar) : *set;
    spec.mode = mode;
    spec.repetitions = repetitions;
    spec.base_seed = base_seed;
    spec.ticks = ticks;
    for (auto row : template_rows) {
      row.cfg.sonar_range = sonar;
      spec.rows.push_back(std::move(row));
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

/// Canonical description of an expanded spec, used to diff file fixtures
/// against the built-in tables.
inline std::string describe_spec(const ExperimentSpec& spec) {
  std::string out;
  out += "label=" + spec.label + " set=" + spec.set_id +
         " mode=" + std::string(mode_name(spec.mode)) +
         " reps=" + std::to_string(spec.repetitions) +
         " base_seed=" + std::to_string(spec.base_seed) +
         " ticks=" + std::to_string(spec.ticks) + "\n";
  for (const auto& row : spec.rows) {
    const auto& c = row.cfg;
    out += "no=" + std::to_string(row.experiment_no) +
           " num_avs=" + std::to_string(c.num_avs) + " min_v=" + io::format_double(c.min_velocity) +
           " max_v=" + io::format_double(c.max_velocity) +
           " acc=" + io::format_double(c.acceleration_rate) +
           " dec=" + io::format_double(c.deceleration_rate) +
           " safety=" + std::to_string(c.safety_distance) +
           " sonar=" + std::to_string(c.sonar_range) +
           " meta=" + (c.metacognition ? "on" : "off") + " li=" + io::format_double(c.li) +
           " ud=" + io::format_double(c.ud) + " ig=" + io::format_double(c.ig) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

inline constexpr std::string_view kRawCsvHeader =
    "set,experiment_no,num_avs,mode,rep,seed,ticks,collisions\n";

inline std::string raw_csv(const SweepSummary& summary, int ticks) {
  std::string out{kRawCsvHeader};
  for (const auto& row : summary.rows) {
    for (std::size_t rep = 0; rep < row.totals.size(); ++rep) {
      out += summary.label + "," + std::to_string(row.experiment_no) + "," +
             std::to_string(row.num_avs) + "," + std::string(mode_name(row.mode)) + "," +
             std::to_string(rep) + "," + std::to_string(row.seeds[rep]) + "," +
             std::to_string(ticks) + "," + std::to_string(row.totals[rep]) + "\n";
    }
  }
  return out;
}

inline constexpr std::string_view kSummaryCsvHeader = "set,num_avs,mode,mean,stdev\n";

inline std::string summary_csv(const SweepSummary& summary) {
  std::string out{kSummaryCsvHeader};
  for (const auto& row : summary.rows) {
    out += summary.label + "," + std::to_string(row.num_avs) + "," +
           std::string(mode_name(row.mode)) + "," + io::format_double(row.mean_collisions) +
           "," + io::format_double(row.stdev_collisions) + "\n";
  }
  return out;
}

struct RawCsvRow {
  std::string set;
  int experiment_no;
  int num_avs;
  std::string mode;
  int rep;
  std::uint64_t seed;
  int ticks;
  long collisions;
};

inline std::vector<RawCsvRow> parse_raw_csv(const std::string& text) {
  std::vector<RawCsvRow> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {  // header
      first = false;
      continue;
    }
    if (io::trim(line).empty()) continue;
    auto f = io::split(line, ',');
    if (f.size() != 8) throw shape_error("raw csv row needs 8 fields: " + line);
    rows.push_back({f[0], std::stoi(f[1]), std::stoi(f[2]), f[3], std::stoi(f[4]),
                    static_cast<std::uint64_t>(std::stoull(f[5])), std::stoi(f[6]),
                    std::stol(f[7])});
  }
  return rows;
}

/// Rebuilds per-set summaries from raw rows (the mean/stdev consistency
/// path used by the report command). Rows group by set label in first-seen
/// order, then by experiment number.
inline std::vector<SweepSummary> summaries_from_raw(const std::vector<RawCsvRow>& raw) {
  std::vector<SweepSummary> out;
  auto find_summary = [&](const std::string& label) -> SweepSummary& {
    for (auto& s : out)
      if (s.label == label) return s;
    out.push_back(SweepSummary{label, io::split(label, '.')[0], Mode::RandomWalk, {}});
    return out.back();
  };
  for (const auto& r : raw) {
    SweepSummary& summary = find_summary(r.set);
    summary.mode = mode_from_name(r.mode);
    SweepRow* row = nullptr;
    for (auto& candidate : summary.rows)
      if (candidate.experiment_no == r.experiment_no) row = &candidate;
    if (!row) {
      summary.rows.push_back(SweepRow{r.experiment_no, r.num_avs, summary.mode, 0, 0, {}, {}});
      row = &summary.rows.back();
    }
    row->totals.push_back(r.collisions);
    row->seeds.push_back(r.seed);
  }
  for (auto& summary : out) {
    std::sort(summary.rows.begin(), summary.rows.end(),
              [](const SweepRow& a, const SweepRow& b) {
                return a.experiment_no < b.experiment_no;
              });
    for (auto& row : summary.rows) {
      row.mean_collisions = mean(row.totals);
      row.stdev_collisions = sample_stdev(row.totals);
    }
  }
  return out;
}

inline std::string comparison_csv(const ComparisonReport& report) {
  std::string out = "set_a,set_b,num_avs,mean_a,mean_b,delta,ratio,pass\n";
  for (const auto& row : report.rows) {
    out += report.label_a + "," + report.label_b + "," + std::to_string(row.num_avs) +
           "," + io::format_double(row.mean_a) + "," + io::format_double(row.mean_b) + "," +
           io::format_double(row.delta) + "," + io::format_double(row.ratio) + "," +
           (row.pass ? "1" : "0") + "\n";
  }
  return out;
}

inline std::string matrix_csv(const SonarSafetyMatrix& matrix) {
  std::string out = "safety_distance,sonar_range,source";
  for (int n : matrix.av_counts) out += "," + std::to_string(n) + "_avs";
  out += "\n";
  for (const auto& row : matrix.rows) {
    out += std::to_string(row.safety_distance) + "," + std::to_string(row.sonar_range) +
           "," + row.label;
    for (double m : row.means) out += "," + io::format_double(m);
    out += "\n";
  }
  return out;
}

/// Plot-data file: one x column (num_avs) and one mean series per mode.
inline std::string plot_csv(const SweepSummary& a, const SweepSummary& b) {
  std::string out = "num_avs," + std::string(mode_name(a.mode)) + "_mean," +
                    std::string(mode_name(b.mode)) + "_mean\n";
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    out += std::to_string(a.rows[i].num_avs) + "," +
           io::format_double(a.rows[i].mean_collisions) + "," +
           io::format_double(b.rows[i].mean_collisions) + "\n";
  }
  return out;
}

}  // namespace avsoc
