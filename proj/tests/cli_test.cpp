// End-to-end runs of the capfade binary against the shipped data tree.

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "capfade/capfade.hpp"
#include "capfade/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kData = CAPFADE_DATA_DIR;

struct RunResult {
  int code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string("\"") + CAPFADE_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "popen failed"};
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::string config(const std::string& name) { return "--config \"" + (kData / "configs" / name).string() + "\""; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("capfade_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string out(const std::string& sub) const { return "--out \"" + (dir / sub).string() + "\""; }

  fs::path dir;
};

}  // namespace

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  auto none = run("");
  EXPECT_EQ(none.code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("simulate --parallel 0").code, 1);
}

TEST_F(CliTest, SimulateCalendarMonthMatchesClosedForm) {
  auto r = run("simulate " + config("calendar_45c.ini") + " " + out("sim"));
  ASSERT_EQ(r.code, 0) << r.output;
  auto summary = read_json(dir / "sim" / "summary.json");
  const double expected = 3.20985377164396490;
  EXPECT_NEAR(summary["final"]["q_total_pct"].get<double>(), expected, 1e-9 * expected);
  EXPECT_EQ(summary["final"]["q_am_pct"].get<double>(), 0.0);
  EXPECT_EQ(summary["saturation"]["saturated_steps"].get<int>(), 0);
  auto traj = capfade::io::load_trajectory_csv(dir / "sim" / "trajectory.csv");
  EXPECT_EQ(traj.points.size(), 31u);
}

TEST_F(CliTest, RecordEveryHorizonGivesTwoRows) {
  auto r = run("simulate " + config("calendar_45c.ini") + " " + out("sim") + " --set run.record_s=2592000");
  ASSERT_EQ(r.code, 0) << r.output;
  auto traj = capfade::io::load_trajectory_csv(dir / "sim" / "trajectory.csv");
  ASSERT_EQ(traj.points.size(), 2u);
  EXPECT_EQ(traj.points[0].time_s, 0.0);
  EXPECT_EQ(traj.points[1].time_s, 2592000.0);
}

TEST_F(CliTest, BadProfilePathIsValidationErrorNamingPath) {
  auto r = run("simulate " + config("calendar_45c.ini") + " " + out("sim") +
               " --set profile.kind=file --set profile.path=no_such_profile.csv");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("no_such_profile.csv"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir / "sim"));
}

TEST_F(CliTest, MissingConfigAndBadValues) {
  EXPECT_EQ(run("simulate --config \"" + (dir / "nope.ini").string() + "\" " + out("x")).code, 1);
  EXPECT_EQ(run("simulate " + config("calendar_45c.ini") + " " + out("x") + " --set profile.kind=warp").code, 1);
  EXPECT_EQ(run("simulate " + config("calendar_45c.ini") + " " + out("x") + " --set run.step_s=fast").code, 1);
  EXPECT_EQ(run("simulate " + config("calendar_45c.ini") + " " + out("x") + " --set profile.soc=1.5").code, 1);
}

TEST_F(CliTest, SimulateIsByteIdenticalAcrossRuns) {
  const std::string args = "simulate " + config("hev_cycling.ini") + " --set run.horizon_days=30 ";
  ASSERT_EQ(run(args + out("a")).code, 0);
  ASSERT_EQ(run(args + out("b")).code, 0);
  for (const char* f : {"trajectory.csv", "summary.json"}) EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
}

TEST_F(CliTest, EolLinearTrajectoryIsFortyYears) {
  capfade::FadeTrajectory t;
  for (int d = 0; d <= 365; ++d) {
    double n = d / 365.0;
    t.points.push_back({d * capfade::kSecondsPerDay, 0.0, 0.5 * n, 0.5 * n});
  }
  capfade::io::write_trajectory_csv(dir / "linear.csv", t);
  auto r = run("eol --set eol.trajectory=\"" + (dir / "linear.csv").string() + "\" " + out("eol"));
  ASSERT_EQ(r.code, 0) << r.output;
  auto report = read_json(dir / "eol" / "eol.json");
  EXPECT_NEAR(report["estimates"][0]["years_to_eol"].get<double>(), 40.0, 1e-9);

  auto joint = run("eol --set eol.fit=total --set eol.trajectory=\"" + (dir / "linear.csv").string() + "\" " + out("eol2"));
  ASSERT_EQ(joint.code, 0) << joint.output;
  EXPECT_NEAR(read_json(dir / "eol2" / "eol.json")["estimates"][0]["years_to_eol"].get<double>(), 40.0, 1e-9);
}

TEST_F(CliTest, EolFlatTrajectoryExitsThree) {
  capfade::FadeTrajectory t;
  for (int d = 0; d <= 365; d += 5) t.points.push_back({d * capfade::kSecondsPerDay, 0.0, 0.0, 0.0});
  capfade::io::write_trajectory_csv(dir / "flat.csv", t);
  auto r = run("eol --set eol.trajectory=\"" + (dir / "flat.csv").string() + "\" " + out("eol"));
  EXPECT_EQ(r.code, 3) << r.output;
}

TEST_F(CliTest, EolPolicyPairOrdering) {
  auto r = run("eol " + config("household.ini") + " " + out("eol") + " --parallel 2");
  ASSERT_EQ(r.code, 0) << r.output;
  auto report = read_json(dir / "eol" / "eol.json");
  ASSERT_EQ(report["estimates"].size(), 2u);
  EXPECT_EQ(report["estimates"][0]["label"], "baseline");
  EXPECT_LT(report["estimates"][1]["years_to_eol"].get<double>(), report["estimates"][0]["years_to_eol"].get<double>());
  EXPECT_EQ(report["earliest_first"][0], "aggressive");
  EXPECT_TRUE(fs::exists(dir / "eol" / "trajectory_aggressive.csv"));
}

TEST_F(CliTest, AnalyzeConstantCurrentFillsOneBin) {
  std::ofstream(dir / "cc.csv") << "time_s,current_a\n0,1.15\n";
  auto r = run("analyze " + config("calendar_45c.ini") + " " + out("an") + " --set profile.kind=file --set profile.path=\"" +
               (dir / "cc.csv").string() + "\" --set profile.soc=0.9 --set run.horizon_days=1");
  ASSERT_EQ(r.code, 0) << r.output;
  auto h = read_json(dir / "an" / "histograms.json");
  const auto& run0 = h["runs"][0];
  int nonzero = 0;
  double total = 0.0;
  for (double s : run0["c_rate_seconds"]) {
    nonzero += s > 0.0;
    total += s;
  }
  EXPECT_EQ(nonzero, 1);
  EXPECT_DOUBLE_EQ(total, capfade::kSecondsPerDay);
  EXPECT_DOUBLE_EQ(run0["soc_seconds_total"].get<double>(), capfade::kSecondsPerDay);
  EXPECT_TRUE(fs::exists(dir / "an" / "c_rate_hist_file.csv"));
}

TEST_F(CliTest, AnalyzeAggressivePolicyIsHeavierAtHighRateAndSoc) {
  auto r = run("analyze " + config("household.ini") + " " + out("an"));
  ASSERT_EQ(r.code, 0) << r.output;
  auto h = read_json(dir / "an" / "histograms.json");
  const auto& base = h["runs"][0];
  const auto& aggr = h["runs"][1];
  EXPECT_EQ(aggr["label"], "aggressive");
  EXPECT_GT(aggr["seconds_above_c_rate"].get<double>(), base["seconds_above_c_rate"].get<double>());
  EXPECT_GT(aggr["seconds_above_soc"].get<double>(), base["seconds_above_soc"].get<double>());
  for (const auto& run : {base, aggr}) {
    EXPECT_DOUBLE_EQ(run["c_rate_seconds_total"].get<double>(), run["horizon_s"].get<double>());
    EXPECT_DOUBLE_EQ(run["soc_seconds_total"].get<double>(), run["horizon_s"].get<double>());
  }
}

TEST_F(CliTest, CalibrateRoundTrip) {
  auto r = run("calibrate " + config("calibrate.ini") + " " + out("cal") + " --parallel 3");
  ASSERT_EQ(r.code, 0) << r.output;
  auto p = capfade::io::load_battery_params(dir / "cal" / "battery_params.ini");
  EXPECT_NEAR(p.k_sei, 7350.0, 0.01 * 7350.0);
  EXPECT_NEAR(p.e_sei, 39333.0, 0.01 * 39333.0);
  EXPECT_NEAR(p.k_am, 1.1798, 0.02 * 1.1798);
  EXPECT_NEAR(p.e_am, 39111.0, 0.02 * 39111.0);
  auto map = capfade::io::load_xmap_csv(dir / "cal" / "xmap.csv");
  for (const auto& k : capfade::lfp26650::x_knots()) EXPECT_NEAR(map.lookup(k.soc, k.temp_k), k.x, 1e-3);
  auto report = read_json(dir / "cal" / "calibration_report.json");
  EXPECT_TRUE(report["converged"].get<bool>());
  EXPECT_EQ(report["step1_sei_reference"]["residuals"].size(), 36u);

  // Thread count does not change any output byte.
  ASSERT_EQ(run("calibrate " + config("calibrate.ini") + " " + out("cal1") + " --parallel 1").code, 0);
  for (const char* f : {"battery_params.ini", "xmap.csv", "calibration_report.json"})
    EXPECT_EQ(slurp(dir / "cal" / f), slurp(dir / "cal1" / f)) << f;
}

TEST_F(CliTest, CalibrateCalendarOnlySkipsStepThree) {
  auto r = run("calibrate " + config("calibrate.ini") + " " + out("cal") + " --set calibrate.cycling=");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("step 3 skipped"), std::string::npos) << r.output;
  auto report = read_json(dir / "cal" / "calibration_report.json");
  EXPECT_TRUE(report["step3_lam"]["skipped"].get<bool>());
  auto p = capfade::io::load_battery_params(dir / "cal" / "battery_params.ini");
  EXPECT_EQ(p.k_am, 1.1798);  // carried from the base parameter file
  EXPECT_TRUE(fs::exists(dir / "cal" / "xmap.csv"));
}

TEST_F(CliTest, CalibrateEmptyDatasetWritesNothing) {
  std::ofstream(dir / "empty.csv") << "";
  auto r = run("calibrate " + config("calibrate.ini") + " " + out("cal") + " --set calibrate.calendar=\"" +
               (dir / "empty.csv").string() + "\"");
  EXPECT_EQ(r.code, 1) << r.output;
  EXPECT_NE(r.output.find("empty.csv"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir / "cal"));
}

TEST_F(CliTest, CalibrateNonConvergenceExitsTwo) {
  auto r = run("calibrate " + config("calibrate.ini") + " " + out("cal") +
               " --set calibrate.cycling= --set calibrate.max_iterations=3 --set calibrate.restarts=0");
  EXPECT_EQ(r.code, 2) << r.output;
  auto report = read_json(dir / "cal" / "calibration_report.json");
  EXPECT_FALSE(report["converged"].get<bool>());
}
