#include "capfade/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "capfade/defaults.hpp"
#include "capfade/units.hpp"

using namespace capfade;

namespace {

const BatteryParams kTable = lfp26650::battery_params();

FadeTrajectory synthetic_trajectory(double a, double b, double years = 1.0, int points = 53) {
  FadeTrajectory t;
  for (int i = 0; i < points; ++i) {
    double s = years * kSecondsPerYear * i / (points - 1);
    double n = s / kSecondsPerYear;
    t.points.push_back({s, a * std::sqrt(n), b * n, a * std::sqrt(n) + b * n});
  }
  return t;
}

HouseholdTrace flat_trace(double pv, double load, int samples = 96) {
  HouseholdTrace tr;
  for (int i = 0; i < samples; ++i) tr.samples.push_back({i * 900.0, pv, load, 295.15});
  tr.duration_s = samples * 900.0;
  return tr;
}

}  // namespace

class SimulateTest : public ::testing::Test {
 protected:
  XMap map = lfp26650::x_map();
  EcmParams ecm = lfp26650::ecm_params();
};

TEST_F(SimulateTest, CalendarYearMatchesClosedForm) {
  auto profile = CurrentProfile::constant(0.0, celsius_to_kelvin(45.0), 1.0);
  SimulationOptions opt;
  opt.initial_soc = 0.5;
  opt.horizon_s = kSecondsPerYear;
  opt.record_every_s = 30.0 * kSecondsPerDay;
  auto r = simulate(profile, kTable, map, ecm, opt);
  const double closed = q_sei_increment(kTable, 0.2841, celsius_to_kelvin(45.0), 0.0, kSecondsPerYear);
  EXPECT_EQ(r.trajectory.points.back().q_am, 0.0);
  EXPECT_NEAR(r.trajectory.points.back().q_total, closed, 1e-10 * closed);
  EXPECT_NEAR(closed, 11.196, 1e-3);
}

TEST_F(SimulateTest, HorizonEqualToRecordIntervalGivesTwoPoints) {
  auto profile = generate_hev_cycle(2.3, 0.48, 298.15);
  SimulationOptions opt;
  opt.horizon_s = 3.0 * kSecondsPerDay;
  opt.record_every_s = opt.horizon_s;
  auto r = simulate(profile, kTable, map, ecm, opt);
  ASSERT_EQ(r.trajectory.points.size(), 2u);
  EXPECT_EQ(r.trajectory.points[0].time_s, 0.0);
  EXPECT_EQ(r.trajectory.points[1].time_s, opt.horizon_s);
}

TEST_F(SimulateTest, CyclingAddsToCalendarFade) {
  CycleConfig cycle;
  cycle.soc_low = 0.20;
  cycle.soc_high = 0.95;
  cycle.temp_k = celsius_to_kelvin(25.0);
  auto cyc = generate_cycle(cycle);
  SimulationOptions opt;
  opt.initial_soc = 0.20;
  opt.horizon_s = kSecondsPerYear;
  opt.record_every_s = 30.0 * kSecondsPerDay;
  auto cycling = simulate(cyc, kTable, map, ecm, opt);
  auto calendar = simulate(cyc.scaled(0.0), kTable, map, ecm, opt);
  EXPECT_GT(cycling.final_fade.q_am, 0.0);
  EXPECT_GT(cycling.final_fade.q_total(), calendar.final_fade.q_total());
}

TEST_F(SimulateTest, TrajectoryInvariants) {
  auto r = simulate(generate_hev_cycle(2.3, 0.48, 310.0), kTable, map, ecm,
                    {0.5, 20.0 * kSecondsPerDay, kSecondsPerDay, 60.0, false});
  for (std::size_t i = 1; i < r.trajectory.points.size(); ++i) {
    const auto& a = r.trajectory.points[i - 1];
    const auto& b = r.trajectory.points[i];
    EXPECT_GE(b.q_sei, a.q_sei);
    EXPECT_GE(b.q_am, a.q_am);
    EXPECT_EQ(b.q_total, b.q_sei + b.q_am);
  }
}

TEST_F(SimulateTest, PeriodicTilingMatchesConcatenation) {
  auto p = generate_hev_cycle(2.3, 0.48, 305.0);
  auto tiled = tile(p, 8);
  SimulationOptions opt;
  opt.horizon_s = 8.0 * p.period();
  opt.record_every_s = p.period();
  auto a = simulate(p, kTable, map, ecm, opt);
  auto b = simulate(tiled, kTable, map, ecm, opt);
  EXPECT_EQ(a.trajectory, b.trajectory);
  EXPECT_EQ(a.soc_series, b.soc_series);
}

TEST_F(SimulateTest, AgingDoesNotFeedBackIntoEcm) {
  auto p = generate_hev_cycle(2.3, 0.48, 305.0);
  SimulationOptions opt;
  opt.horizon_s = 2.0 * kSecondsPerDay;
  auto a = simulate(p, kTable, map, ecm, opt);
  BatteryParams other = kTable;
  other.k_sei *= 50.0;
  other.k_am *= 1e6;
  auto b = simulate(p, other, map, ecm, opt);
  EXPECT_EQ(a.soc_series, b.soc_series);
  EXPECT_EQ(a.final_ecm.v1, b.final_ecm.v1);
}

TEST_F(SimulateTest, ResumedAgingReproducesTrajectory) {
  auto p = generate_hev_cycle(2.3, 0.48, 305.0);
  // Resume on a period boundary so both runs take identical steps.
  const double mid = 100.0 * p.period();
  const double end = 200.0 * p.period();
  CoupledSimulator full(p, kTable, map, ecm, 0.5);
  full.advance_to(end);

  CoupledSimulator split(p, kTable, map, ecm, 0.5);
  split.advance_to(mid);
  FadeState snapshot = split.fade();
  split.reset_aging(FadeState{});
  split.reset_aging(snapshot);
  split.advance_to(end);
  EXPECT_EQ(full.fade(), split.fade());
}

TEST_F(SimulateTest, Deterministic) {
  auto p = generate_hev_cycle(2.3, 0.48, 305.0);
  SimulationOptions opt;
  opt.horizon_s = 5.0 * kSecondsPerDay;
  EXPECT_EQ(simulate(p, kTable, map, ecm, opt), simulate(p, kTable, map, ecm, opt));
}

TEST_F(SimulateTest, Errors) {
  auto p = generate_hev_cycle(2.3, 0.48, 305.0);
  SimulationOptions opt;
  opt.horizon_s = 0.0;
  EXPECT_THROW(simulate(p, kTable, map, ecm, opt), DomainError);
  opt = {};
  opt.record_every_s = -1.0;
  EXPECT_THROW(simulate(p, kTable, map, ecm, opt), DomainError);
  opt = {};
  opt.initial_soc = 1.5;
  EXPECT_THROW(simulate(p, kTable, map, ecm, opt), DomainError);
}

TEST(BaselinePolicy, SurplusChargesAtSurplusOverVoltage) {
  auto ecm = lfp26650::ecm_params();
  ecm.capacity_ah = 1e6;  // keep far from the SOC limits
  PackConfig pack{1, 1, 3.3};
  auto p = baseline_policy(flat_trace(2000.0, 1000.0), ecm, pack, 0.5);
  EXPECT_DOUBLE_EQ(p.samples()[0].current_a, -1000.0 / 3.3);
}

TEST(BaselinePolicy, DeficitAtFloorDrawsNothing) {
  auto ecm = lfp26650::ecm_params();
  PackConfig pack{1, 1, 3.3};
  auto p = baseline_policy(flat_trace(0.0, 500.0), ecm, pack, 0.20);
  for (const auto& s : p.samples()) EXPECT_EQ(s.current_a, 0.0);
}

TEST(BaselinePolicy, BalancedTraceGivesZeroCurrent) {
  auto p = baseline_policy(flat_trace(800.0, 800.0), lfp26650::ecm_params(), PackConfig{}, 0.5);
  for (const auto& s : p.samples()) EXPECT_EQ(s.current_a, 0.0);
}

TEST(BaselinePolicy, RespectsSocLimitsAndTemperature) {
  auto ecm = lfp26650::ecm_params();
  auto trace = synthetic_household_trace({.days = 20});
  PackConfig pack;
  auto p = baseline_policy(trace, ecm, pack, 0.5);
  SimulationOptions opt;
  opt.horizon_s = trace.duration_s;
  auto r = simulate(p, lfp26650::battery_params(), lfp26650::x_map(), ecm, opt);
  EXPECT_EQ(r.saturation.saturated_steps, 0u);
  for (const auto& s : r.soc_series) EXPECT_GE(s.soc, 0.20 - 1e-9);
  for (std::size_t i = 0; i < p.samples().size(); ++i) EXPECT_EQ(p.samples()[i].temp_k, trace.samples[i].temp_k);
}

TEST(AggressivePolicy, WorksBatteryHarderThanBaseline) {
  auto ecm = lfp26650::ecm_params();
  auto trace = synthetic_household_trace({.days = 30});
  PackConfig pack;
  auto base = baseline_policy(trace, ecm, pack, 0.5);
  auto aggr = aggressive_policy(trace, ecm, pack, 0.5);
  EXPECT_GT(throughput(aggr), throughput(base));
}

TEST(SyntheticTrace, DeterministicPerSeed) {
  auto a = synthetic_household_trace({.days = 3, .seed = 5});
  auto b = synthetic_household_trace({.days = 3, .seed = 5});
  auto c = synthetic_household_trace({.days = 3, .seed = 6});
  ASSERT_EQ(a.samples.size(), 3u * 96u);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].load_w, b.samples[i].load_w);
    EXPECT_EQ(a.samples[i].pv_w, b.samples[i].pv_w);
  }
  EXPECT_NE(a.samples[40].pv_w, c.samples[40].pv_w);
}

TEST(ExtrapolateEol, LinearFade) {
  auto est = extrapolate_eol(synthetic_trajectory(0.0, 0.5));
  EXPECT_NEAR(est.years_to_eol, 40.0, 1e-9);
  EXPECT_NEAR(est.linear_coefficient, 0.5, 1e-12);
  EXPECT_NEAR(est.sqrt_coefficient, 0.0, 1e-12);
}

TEST(ExtrapolateEol, SquareRootFade) {
  auto est = extrapolate_eol(synthetic_trajectory(2.5, 0.0));
  EXPECT_NEAR(est.years_to_eol, std::pow(20.0 / 2.5, 2), 1e-9);
}

TEST(ExtrapolateEol, RecoversMixedCoefficients) {
  for (auto fit : {EolFit::per_mechanism, EolFit::total}) {
    EolOptions opt;
    opt.fit = fit;
    for (auto [a, b] : {std::pair{3.0, 0.2}, std::pair{0.7, 1.3}, std::pair{5.0, 0.01}}) {
      auto est = extrapolate_eol(synthetic_trajectory(a, b), opt);
      EXPECT_NEAR(est.sqrt_coefficient, a, 1e-6 * a);
      EXPECT_NEAR(est.linear_coefficient, b, 1e-6 * b);
      double u = std::sqrt(est.years_to_eol);
      EXPECT_NEAR(a * u + b * u * u, 20.0, 1e-9);
    }
  }
}

TEST(ExtrapolateEol, PerMechanismIgnoresCurvatureInSeiLoss) {
  // SEI loss that speeds up mid-window, as under a seasonal SOC swing.
  FadeTrajectory t;
  for (int i = 0; i <= 52; ++i) {
    double n = i / 52.0;
    double q = 2.0 * std::sqrt(n) * (1.0 + 0.3 * n * n);
    t.points.push_back({n * kSecondsPerYear, q, 0.0, q});
  }
  EolOptions joint;
  joint.fit = EolFit::total;
  auto total = extrapolate_eol(t, joint);
  auto split = extrapolate_eol(t);
  EXPECT_GT(total.linear_coefficient, 0.1);
  EXPECT_EQ(split.linear_coefficient, 0.0);
  EXPECT_NEAR(split.years_to_eol, std::pow(20.0 / split.sqrt_coefficient, 2), 1e-9);
}

TEST(ExtrapolateEol, ThresholdIsConfigurable) {
  EolOptions opt;
  opt.threshold = 0.9;
  EXPECT_NEAR(extrapolate_eol(synthetic_trajectory(0.0, 0.5), opt).years_to_eol, 20.0, 1e-9);
}

TEST(ExtrapolateEol, Errors) {
  EXPECT_THROW(extrapolate_eol(synthetic_trajectory(0.0, 0.0)), NoEolError);
  EXPECT_THROW(extrapolate_eol(synthetic_trajectory(1.0, 0.0, 0.5)), ValidationError);
  EolOptions bad;
  bad.threshold = 1.0;
  EXPECT_THROW(extrapolate_eol(synthetic_trajectory(1.0, 0.0), bad), DomainError);
}

TEST(ExtrapolateEol, MonotoneInCurrentScaling) {
  auto ecm = lfp26650::ecm_params();
  auto map = lfp26650::x_map();
  auto hev = generate_hev_cycle(2.3, 0.48, celsius_to_kelvin(25.0));
  SimulationOptions opt;
  opt.horizon_s = kSecondsPerYear;
  opt.record_every_s = 7.0 * kSecondsPerDay;
  opt.max_step_s = 1e9;
  opt.record_soc = false;
  BatteryParams strong_am = lfp26650::battery_params();
  strong_am.k_am *= 1e4;
  double prev_years = 1e300;
  double prev_am = -1.0;
  for (double alpha : {1.0, 1.5, 2.0, 3.0}) {
    auto r = simulate(hev.scaled(alpha), strong_am, map, ecm, opt);
    auto est = extrapolate_eol(r.trajectory);
    EXPECT_LE(est.years_to_eol, prev_years);
    EXPECT_GE(r.final_fade.q_am, prev_am);
    prev_years = est.years_to_eol;
    prev_am = r.final_fade.q_am;
  }
}

TEST(UsageHistograms, ConstantOneC) {
  auto p = CurrentProfile::constant(2.3, 298.15, 3600.0);
  std::vector<SocSample> soc = {{0.0, 0.5}};
  auto h = usage_histograms(p, soc, 2.3, 3600.0, uniform_edges(-2.0, 2.0, 8), uniform_edges(0.0, 1.0, 10));
  EXPECT_EQ(h.c_rate.seconds[h.c_rate.bin_of(1.0)], 3600.0);
  EXPECT_EQ(h.c_rate.total(), 3600.0);
  EXPECT_EQ(h.c_rate.mass_at_or_above(1.0), 3600.0);
}

TEST(UsageHistograms, ZeroCurrentAllAtZero) {
  auto p = CurrentProfile::constant(0.0, 298.15, 100.0);
  std::vector<SocSample> soc = {{0.0, 0.5}};
  auto h = usage_histograms(p, soc, 2.3, 1000.0, uniform_edges(-1.0, 1.0, 4), uniform_edges(0.0, 1.0, 4));
  EXPECT_EQ(h.c_rate.seconds[h.c_rate.bin_of(0.0)], 1000.0);
  EXPECT_EQ(h.soc.seconds[h.soc.bin_of(0.5)], 1000.0);
}

TEST(UsageHistograms, SquareWaveSplitsEvenly) {
  CurrentProfile p({{0.0, 2.3, 298.15}, {600.0, -2.3, 298.15}}, 1200.0, true);
  std::vector<SocSample> soc = {{0.0, 0.4}, {600.0, 0.6}, {1200.0, 0.4}, {1800.0, 0.6}};
  auto h = usage_histograms(p, soc, 2.3, 2400.0, uniform_edges(-2.0, 2.0, 8), uniform_edges(0.0, 1.0, 10));
  EXPECT_EQ(h.c_rate.seconds[h.c_rate.bin_of(1.0)], 1200.0);
  EXPECT_EQ(h.c_rate.seconds[h.c_rate.bin_of(-1.0)], 1200.0);
  EXPECT_EQ(h.soc.seconds[h.soc.bin_of(0.4)], h.soc.seconds[h.soc.bin_of(0.6)]);
}

TEST(UsageHistograms, MassEqualsHorizon) {
  auto trace = synthetic_household_trace({.days = 10});
  auto ecm = lfp26650::ecm_params();
  auto p = aggressive_policy(trace, ecm, PackConfig{}, 0.5);
  SimulationOptions opt;
  opt.horizon_s = trace.duration_s;
  auto r = simulate(p, lfp26650::battery_params(), lfp26650::x_map(), ecm, opt);
  auto h = usage_histograms(p, r.soc_series, 2.3, opt.horizon_s, uniform_edges(-1.5, 1.5, 12), uniform_edges(0.0, 1.0, 20));
  EXPECT_NEAR(h.c_rate.total(), opt.horizon_s, 1e-12 * opt.horizon_s);
  EXPECT_NEAR(h.soc.total(), opt.horizon_s, 1e-12 * opt.horizon_s);
}
