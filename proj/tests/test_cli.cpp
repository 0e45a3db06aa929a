#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "avsoc/cli.hpp"

using namespace avsoc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("avsoc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("validate-fuzzy passes on the frozen peaks", "[cli]") {
  std::ostringstream out, err;
  int status = cli::cmd_validate_fuzzy({}, out, err);
  CHECK(status == 0);
  CHECK(err.str().find("14/14") != std::string::npos);
  std::string table = out.str();
  CHECK(std::count(table.begin(), table.end(), '\n') == 15);  // header + 14 rows
  CHECK(table.find("VHUD") != std::string::npos);
}

TEST_CASE("run writes deterministic outputs", "[cli]") {
  fs::path dir = temp_dir("run");
  cli::RunOptions opt;
  opt.cfg.num_avs = 1;
  opt.ticks = 100;
  opt.seed = 7;
  opt.out_dir = dir.string();
  std::ostringstream out1, err1;
  CHECK(cli::cmd_run(opt, out1, err1) == 0);
  CHECK(out1.str() == "0\n");  // a lone vehicle cannot collide
  std::string first = io::read_text_file(dir / "run.csv");

  std::ostringstream out2, err2;
  CHECK(cli::cmd_run(opt, out2, err2) == 0);
  CHECK(io::read_text_file(dir / "run.csv") == first);  // byte-identical rerun
  fs::remove_all(dir);
}

TEST_CASE("run rejects out-of-range configuration", "[cli]") {
  cli::RunOptions opt;
  opt.cfg.num_avs = 31;
  std::ostringstream out, err;
  CHECK(cli::cmd_run(opt, out, err) == 1);
  CHECK(err.str().find("num_avs") != std::string::npos);
}

TEST_CASE("run emits traces only when asked, fear rows only in norms mode", "[cli]") {
  fs::path dir = temp_dir("trace");
  cli::RunOptions opt;
  opt.cfg.num_avs = 10;
  opt.cfg.metacognition = false;
  opt.ticks = 50;
  opt.trace = true;
  opt.out_dir = dir.string();
  std::ostringstream out, err;
  REQUIRE(cli::cmd_run(opt, out, err) == 0);
  std::string walk_fear = io::read_text_file(dir / "fear_trace.csv");
  CHECK(std::count(walk_fear.begin(), walk_fear.end(), '\n') == 1);  // header only
  std::string walk_trace = io::read_text_file(dir / "trace.csv");
  CHECK(std::count(walk_trace.begin(), walk_trace.end(), '\n') == 1 + 10 * 50);

  opt.cfg.metacognition = true;
  std::ostringstream out2, err2;
  REQUIRE(cli::cmd_run(opt, out2, err2) == 0);
  std::string norm_fear = io::read_text_file(dir / "fear_trace.csv");
  CHECK(std::count(norm_fear.begin(), norm_fear.end(), '\n') > 1);
  fs::remove_all(dir);
}

TEST_CASE("sweep writes raw and summary files per sub-sweep", "[cli]") {
  fs::path dir = temp_dir("sweep");
  cli::SweepOptions opt;
  opt.set = "a1";
  opt.jobs = 2;
  opt.ticks = 60;
  opt.out_dir = dir.string();
  std::ostringstream out, err;
  REQUIRE(cli::cmd_sweep(opt, out, err) == 0);
  for (const char* label : {"a1_sonar2", "a1_sonar5"}) {
    std::string raw = io::read_text_file(dir / "raw" / (std::string(label) + ".csv"));
    CHECK(std::count(raw.begin(), raw.end(), '\n') == 36);  // header + 35 runs
    std::string summary =
        io::read_text_file(dir / "summary" / (std::string(label) + ".csv"));
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 6);  // header + 5 rows
  }
  fs::remove_all(dir);
}

TEST_CASE("sweep rejects unknown set names", "[cli]") {
  cli::SweepOptions opt;
  opt.set = "z9";
  std::ostringstream out, err;
  CHECK(cli::cmd_sweep(opt, out, err) == 1);
  CHECK(err.str().find("z9") != std::string::npos);
}

TEST_CASE("sweep accepts a custom spec file", "[cli]") {
  fs::path dir = temp_dir("spec");
  io::write_text_file(dir / "tiny.spec",
                      "set = tiny\nmode = norms\nrepetitions = 2\nticks = 40\n"
                      "[experiment]\nnum_avs = 5\nsonar_range = 2\n");
  cli::SweepOptions opt;
  opt.spec_file = (dir / "tiny.spec").string();
  opt.out_dir = dir.string();
  std::ostringstream out, err;
  REQUIRE(cli::cmd_sweep(opt, out, err) == 0);
  std::string raw = io::read_text_file(dir / "raw" / "tiny.csv");
  CHECK(std::count(raw.begin(), raw.end(), '\n') == 3);  // header + 1 row x 2 reps
  fs::remove_all(dir);
}

TEST_CASE("report joins raws into comparisons and flags absences", "[cli]") {
  fs::path dir = temp_dir("report");

  cli::SweepOptions sweep_opt;
  sweep_opt.jobs = 2;
  sweep_opt.ticks = 60;
  sweep_opt.out_dir = dir.string();
  for (const char* set : {"a3", "b3"}) {
    sweep_opt.set = set;
    std::ostringstream out, err;
    REQUIRE(cli::cmd_sweep(sweep_opt, out, err) == 0);
  }

  cli::ReportOptions opt;
  opt.out_dir = dir.string();
  opt.sets = "a3,b3";
  std::ostringstream out, err;
  REQUIRE(cli::cmd_report(opt, out, err) == 0);
  std::string comparison = io::read_text_file(dir / "report" / "comparison.csv");
  CHECK(std::count(comparison.begin(), comparison.end(), '\n') == 6);
  CHECK(comparison.find("a3,b3,10") != std::string::npos);
  CHECK(fs::exists(dir / "report" / "plot_set3.csv"));
  CHECK(fs::exists(dir / "summary" / "a3.csv"));

  cli::ReportOptions all;
  all.out_dir = dir.string();
  std::ostringstream out2, err2;
  CHECK(cli::cmd_report(all, out2, err2) == 1);  // most raw files missing
  CHECK(err2.str().find("missing raw files") != std::string::npos);
  CHECK(err2.str().find("a1_sonar2.csv") != std::string::npos);

  cli::ReportOptions bogus;
  bogus.out_dir = dir.string();
  bogus.sets = "a3,z9";
  std::ostringstream out3, err3;
  CHECK(cli::cmd_report(bogus, out3, err3) == 1);
  CHECK(err3.str().find("z9") != std::string::npos);
  fs::remove_all(dir);
}
