#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "avsoc/experiments.hpp"

using namespace avsoc;
using Catch::Approx;

namespace {

std::string fixture(const std::string& name) {
  return io::read_text_file(std::string(AVSOC_SOURCE_DIR) + "/data/experiments/" + name);
}

SweepSummary summary_from_means(const std::string& label, Mode mode,
                                std::initializer_list<double> means) {
  SweepSummary s;
  s.label = label;
  s.set_id = label;
  s.mode = mode;
  int no = 1;
  static const int counts[5] = {10, 15, 20, 25, 30};
  for (double m : means) {
    SweepRow row;
    row.experiment_no = no;
    row.num_avs = counts[no - 1];
    row.mode = mode;
    row.mean_collisions = m;
    s.rows.push_back(row);
    ++no;
  }
  return s;
}

}  // namespace

TEST_CASE("single runs are deterministic and validated", "[experiments]") {
  WorldConfig cfg;
  cfg.num_avs = 1;
  RunResult lonely = run_simulation(cfg, 100, 7);
  CHECK(lonely.total_collisions == 0);
  CHECK(lonely.per_tick.size() == 100);

  cfg.num_avs = 12;
  RunResult a = run_simulation(cfg, 300, 99);
  RunResult b = run_simulation(cfg, 300, 99);
  CHECK(a.total_collisions == b.total_collisions);
  CHECK(a.per_tick == b.per_tick);

  cfg.num_avs = 31;
  CHECK_THROWS_AS(run_simulation(cfg, 10, 1), config_error);
}

TEST_CASE("denser random-walk societies collide more", "[experiments]") {
  WorldConfig small;
  small.num_avs = 10;
  WorldConfig large = small;
  large.num_avs = 30;
  int majority = 0;
  for (std::uint64_t seed = 0; seed < 7; ++seed) {
    long c_small = run_simulation(small, 1000, 42 + seed).total_collisions;
    long c_large = run_simulation(large, 1000, 42 + seed).total_collisions;
    majority += c_large > c_small;
  }
  CHECK(majority >= 4);
}

TEST_CASE("sweep shape, seeds and statistics", "[experiments]") {
  ExperimentSpec spec = find_experiment_specs("a1.sonar2").at(0);
  spec.ticks = 200;  // shorter runs, same structure
  SweepSummary summary = run_sweep(spec, 2);
  REQUIRE(summary.rows.size() == 5);

  std::set<std::uint64_t> seeds;
  long total_runs = 0;
  for (const auto& row : summary.rows) {
    CHECK(row.totals.size() == 7);
    total_runs += static_cast<long>(row.totals.size());
    for (auto s : row.seeds) seeds.insert(s);

    // Textbook mean / n-1 stdev oracle.
    double m = 0.0;
    for (long v : row.totals) m += static_cast<double>(v);
    m /= static_cast<double>(row.totals.size());
    double ss = 0.0;
    for (long v : row.totals) ss += (v - m) * (v - m);
    double sd = std::sqrt(ss / (row.totals.size() - 1));
    CHECK(row.mean_collisions == Approx(m).epsilon(1e-9));
    CHECK(row.stdev_collisions == Approx(sd).epsilon(1e-9));
  }
  CHECK(total_runs == 35);
  CHECK(seeds.size() == 35);  // no two runs share a seed
  CHECK(summary.rows[0].seeds[0] == 42);
  CHECK(summary.rows[1].seeds[0] == 1042);
  CHECK(sweep_seed(42, 2, 3) == 2045);
}

TEST_CASE("sweeps reject bad rows before running", "[experiments]") {
  ExperimentSpec spec = find_experiment_specs("a3").at(0);
  spec.rows[2].cfg.num_avs = 99;
  try {
    run_sweep(spec);
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(e.key() == "num_avs");
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
}

TEST_CASE("sweeps are reproducible at any parallelism", "[experiments]") {
  ExperimentSpec spec = find_experiment_specs("b3").at(0);
  spec.ticks = 200;
  SweepSummary serial = run_sweep(spec, 1);
  SweepSummary threaded = run_sweep(spec, 4);
  CHECK(raw_csv(serial, spec.ticks) == raw_csv(threaded, spec.ticks));
  CHECK(summary_csv(serial) == summary_csv(threaded));
}

TEST_CASE("mode comparison over reference set-1 means", "[experiments]") {
  auto a = summary_from_means("a1", Mode::RandomWalk,
                              {48.63886, 95.57575, 152.584, 222.3648, 305.439});
  auto b = summary_from_means("b1", Mode::Norms,
                              {2.573837, 7.317401, 16.17935, 32.20731, 59.35412});
  ComparisonReport report = compare_modes(a, b);
  CHECK(report.all_pass);
  CHECK(report.rows[0].delta == Approx(48.63886 - 2.573837));
  CHECK(report.rows[0].ratio > 18.0);

  // Reference set-5 extreme at 30 AVs.
  auto a5 = summary_from_means("a5", Mode::RandomWalk, {37.75169, 85.15609, 145.9167,
                                                        215.4169, 294.7733});
  auto b5 = summary_from_means("b5", Mode::Norms,
                               {0.791342, 2.084906, 7.152462, 11.63587, 4.069908});
  CHECK(compare_modes(a5, b5).all_pass);

  ComparisonReport equal = compare_modes(a, a);
  CHECK_FALSE(equal.all_pass);  // strict inequality
  for (const auto& row : equal.rows) CHECK(row.delta == 0.0);

  auto truncated = a;
  truncated.rows.pop_back();
  CHECK_THROWS_AS(compare_modes(truncated, b), shape_error);
}

TEST_CASE("sonar/safety matrix over reference values", "[experiments]") {
  auto c11 = summary_from_means("b5", Mode::Norms,
                                {0.791342, 2.084906, 7.152462, 11.63587, 4.069908});
  auto c22 = summary_from_means("b3", Mode::Norms,
                                {0.785513, 2.268417, 4.767293, 8.728624, 14.69935});
  auto c25 = summary_from_means("b2.sonar5", Mode::Norms,
                                {0.814496, 2.711523, 6.390049, 13.36398, 24.04687});
  auto c32 = summary_from_means("b1.sonar2", Mode::Norms,
                                {3.01972, 8.936398, 20.14434, 40.31569, 72.42839});
  auto c33 = summary_from_means("b4", Mode::Norms,
                                {1.889218, 6.042479, 14.54727, 28.01678, 44.53196});
  auto c35 = summary_from_means("b1.sonar5", Mode::Norms,
                                {2.127955, 5.698404, 12.21435, 24.09892, 46.27984});
  std::vector<MatrixSource> sources{{1, 1, &c11}, {2, 2, &c22}, {2, 5, &c25},
                                    {3, 2, &c32}, {3, 3, &c33}, {3, 5, &c35}};
  SonarSafetyMatrix matrix = sonar_safety_matrix(sources);
  CHECK(matrix.high_safety_low_sonar_worst);
  REQUIRE(matrix.rows.size() == 6);
  CHECK(matrix.rows[0].safety_distance == 1);
  CHECK(matrix.rows[0].means[0] == Approx(0.791342));

  // The two smallest 10-AV cells are (1,1) and (2,2).
  std::vector<double> col0;
  for (const auto& row : matrix.rows) col0.push_back(row.means[0]);
  std::sort(col0.begin(), col0.end());
  CHECK(col0[0] == Approx(0.785513));
  CHECK(col0[1] == Approx(0.791342));

  std::vector<MatrixSource> dup{{1, 1, &c11}, {1, 1, &c22}, {2, 5, &c25},
                                {3, 2, &c32}, {3, 3, &c33}, {3, 5, &c35}};
  CHECK_THROWS_AS(sonar_safety_matrix(dup), shape_error);

  std::vector<MatrixSource> missing{{1, 1, &c11}, {2, 2, &c22}};
  try {
    sonar_safety_matrix(missing);
    FAIL("expected shape_error");
  } catch (const shape_error& e) {
    CHECK(std::string(e.what()).find("(3,2)") != std::string::npos);
  }
}

TEST_CASE("built-in specs carry the expected sweep parameters", "[experiments]") {
  auto specs = builtin_experiment_specs();
  CHECK(specs.size() == 14);

  auto a1 = find_experiment_specs("a1");
  REQUIRE(a1.size() == 2);  // sonar 2 and sonar 5 sub-sweeps
  CHECK(a1[0].label == "a1.sonar2");
  CHECK(a1[1].label == "a1.sonar5");
  for (const auto& spec : a1) {
    CHECK(spec.repetitions == 7);
    CHECK(spec.rows.size() == 5);
    for (const auto& row : spec.rows) {
      CHECK(row.cfg.min_velocity == 0.14);
      CHECK(row.cfg.max_velocity == 0.8);
      CHECK(row.cfg.acceleration_rate == 0.1);
      CHECK(row.cfg.deceleration_rate == 0.1);
      CHECK(row.cfg.safety_distance == 3);
      CHECK_FALSE(row.cfg.metacognition);
    }
    CHECK(spec.rows[0].cfg.num_avs == 10);
    CHECK(spec.rows[4].cfg.num_avs == 30);
  }

  for (const auto& spec : find_experiment_specs("all")) {
    bool norms = spec.set_id[0] == 'b';
    for (const auto& row : spec.rows) {
      CHECK(row.cfg.metacognition == norms);
      CHECK(row.cfg.li == 0.1);
      CHECK(row.cfg.ud == 0.1);
      CHECK(row.cfg.ig == 1.0);
    }
  }

  CHECK_THROWS_AS(find_experiment_specs("z9"), config_error);
}

TEST_CASE("spec file fixtures expand to the built-in sweeps", "[experiments]") {
  const char* names[10] = {"a1", "a2", "a3", "a4", "a5", "b1", "b2", "b3", "b4", "b5"};
  for (const char* name : names) {
    auto parsed = parse_experiment_file(fixture(std::string(name) + ".spec"));
    auto builtin = find_experiment_specs(name);
    REQUIRE(parsed.size() == builtin.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      INFO(name << " variant " << i);
      CHECK(describe_spec(parsed[i]) == describe_spec(builtin[i]));
    }
  }
}

TEST_CASE("spec file parsing rejects malformed input", "[experiments]") {
  CHECK_THROWS_AS(parse_experiment_file("mode = norms\n"), config_error);
  CHECK_THROWS_AS(parse_experiment_file("set = x\n[experiment]\nnum_avs = 10\nbogus = 1\n"),
                  config_error);
  CHECK_THROWS_AS(parse_experiment_file("set = x\n[weird]\nnum_avs = 10\n"), config_error);
  CHECK_THROWS_AS(
      parse_experiment_file("set = x\n[experiment]\nnum_avs = 10\nsonar_range = a, b\n"),
      config_error);
  auto ok = parse_experiment_file(
      "set = x\nmode = norms\n[experiment]\nnum_avs = 10\nsonar_range = 2, 5\n");
  CHECK(ok.size() == 2);
  CHECK(ok[0].label == "x.sonar2");
  CHECK(ok[1].rows[0].cfg.sonar_range == 5);
  CHECK(ok[0].rows[0].cfg.metacognition);
}

TEST_CASE("raw CSV round-trips into consistent summaries", "[experiments]") {
  ExperimentSpec spec = find_experiment_specs("a5").at(0);
  spec.ticks = 150;
  SweepSummary summary = run_sweep(spec, 2);
  std::string csv = raw_csv(summary, spec.ticks);
  auto rows = parse_raw_csv(csv);
  CHECK(rows.size() == 35);
  auto rebuilt = summaries_from_raw(rows);
  REQUIRE(rebuilt.size() == 1);
  CHECK(rebuilt[0].label == "a5");
  REQUIRE(rebuilt[0].rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(rebuilt[0].rows[i].mean_collisions ==
          Approx(summary.rows[i].mean_collisions).epsilon(1e-12));
    CHECK(rebuilt[0].rows[i].stdev_collisions ==
          Approx(summary.rows[i].stdev_collisions).epsilon(1e-12));
    CHECK(rebuilt[0].rows[i].totals == summary.rows[i].totals);
  }
}
