#ifndef CAPFADE_SCENARIO_HPP
#define CAPFADE_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "capfade/aging.hpp"
#include "capfade/ecm.hpp"
#include "capfade/error.hpp"
#include "capfade/profile.hpp"
#include "capfade/simulator.hpp"
#include "capfade/units.hpp"
#include "capfade/xmap.hpp"

namespace capfade {

// ---------------------------------------------------------------------------
// Household traces and dispatch policies

struct TraceSample {
  double time_s;
  double pv_w;
  double load_w;
  double temp_k;
};

/// PV generation and household load, held from each sample to the next.
/// The last sample lasts until `duration`.
struct HouseholdTrace {
  std::vector<TraceSample> samples;
  double duration_s = 0.0;

  void validate() const {
    if (samples.empty()) throw ValidationError("HouseholdTrace: no samples");
    if (samples.front().time_s != 0.0) throw ValidationError("HouseholdTrace: first sample must be at t = 0");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      if (!(s.pv_w >= 0.0) || !(s.load_w >= 0.0))
        throw ValidationError("HouseholdTrace: negative power at row " + std::to_string(i + 1));
      if (!(s.temp_k > 0.0)) throw ValidationError("HouseholdTrace: invalid temperature at row " + std::to_string(i + 1));
      if (i > 0 && !(s.time_s > samples[i - 1].time_s))
        throw ValidationError("HouseholdTrace: times not strictly increasing at row " + std::to_string(i + 1));
    }
    if (!(duration_s > samples.back().time_s)) throw ValidationError("HouseholdTrace: duration must exceed last sample time");
  }

  [[nodiscard]] double sample_end(std::size_t i) const {
    return i + 1 < samples.size() ? samples[i + 1].time_s : duration_s;
  }
};

/// Maps household power onto one cell of a series x parallel pack.
struct PackConfig {
  int series = 16;
  int parallel = 115;
  double cell_nominal_voltage = 3.3;

  [[nodiscard]] double nominal_voltage() const noexcept { return series * cell_nominal_voltage; }
  /// Per-cell current for a pack power (W).
  [[nodiscard]] double cell_current(double pack_power_w) const noexcept {
    return pack_power_w / nominal_voltage() / parallel;
  }

  void validate() const {
    if (series < 1 || parallel < 1 || !(cell_nominal_voltage > 0.0)) throw ConfigError("PackConfig: invalid pack layout");
  }
};

namespace detail {

// Tracks coulomb-counted SOC while a policy emits per-cell currents.
class PolicyLedger {
 public:
  PolicyLedger(const EcmParams& ecm, double initial_soc) : capacity_as_(ecm.capacity_ah * kSecondsPerHour), soc_(initial_soc) {
    if (!(initial_soc >= 0.0 && initial_soc <= 1.0)) throw DomainError("policy: initial soc outside [0, 1]");
  }

  [[nodiscard]] double soc() const noexcept { return soc_; }

  /// Largest discharge current over dt that keeps soc >= floor.
  [[nodiscard]] double max_discharge(double floor, double dt) const noexcept {
    return std::max(0.0, (soc_ - floor) * capacity_as_ / dt);
  }
  /// Largest charge current magnitude over dt that keeps soc <= ceiling.
  [[nodiscard]] double max_charge(double ceiling, double dt) const noexcept {
    return std::max(0.0, (ceiling - soc_) * capacity_as_ / dt);
  }

  void apply(double current, double dt) noexcept { soc_ = std::clamp(soc_ - current * dt / capacity_as_, 0.0, 1.0); }

 private:
  double capacity_as_;
  double soc_;
};

}  // namespace detail

/// Rule-based dispatch: PV surplus charges the battery (up to full), a
/// deficit discharges it while SOC stays above soc_floor; otherwise the grid
/// covers the load. Battery temperature follows the trace temperature.
inline CurrentProfile baseline_policy(const HouseholdTrace& trace, const EcmParams& ecm, const PackConfig& pack,
                                      double initial_soc, double soc_floor = 0.20) {
  trace.validate();
  pack.validate();
  detail::PolicyLedger ledger(ecm, initial_soc);
  std::vector<ProfileSample> out;
  out.reserve(trace.samples.size());
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& s = trace.samples[i];
    const double dt = trace.sample_end(i) - s.time_s;
    double current = 0.0;
    if (s.pv_w > s.load_w) {
      current = -std::min(pack.cell_current(s.pv_w - s.load_w), ledger.max_charge(1.0, dt));
    } else if (s.load_w > s.pv_w) {
      current = std::min(pack.cell_current(s.load_w - s.pv_w), ledger.max_discharge(soc_floor, dt));
    }
    ledger.apply(current, dt);
    out.push_back({s.time_s, current, s.temp_k});
  }
  return CurrentProfile(std::move(out), trace.duration_s, false);
}

/// A deliberately battery-heavy dispatch used as a stand-in for an
/// optimizing home energy manager: it tops the battery up from the grid to
/// soc_high whenever PV does not cover the load, and during the evening peak
/// window discharges at no less than peak_discharge_c.
struct AggressivePolicyOptions {
  double soc_floor = 0.20;
  double soc_high = 0.95;
  double grid_charge_c = 0.5;
  double peak_discharge_c = 1.0;
  double peak_begin_h = 17.0;
  double peak_end_h = 21.0;
};

inline CurrentProfile aggressive_policy(const HouseholdTrace& trace, const EcmParams& ecm, const PackConfig& pack,
                                        double initial_soc, const AggressivePolicyOptions& opt = {}) {
  trace.validate();
  pack.validate();
  detail::PolicyLedger ledger(ecm, initial_soc);
  std::vector<ProfileSample> out;
  out.reserve(trace.samples.size());
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& s = trace.samples[i];
    const double dt = trace.sample_end(i) - s.time_s;
    const double hour = std::fmod(s.time_s, kSecondsPerDay) / kSecondsPerHour;
    const bool peak = hour >= opt.peak_begin_h && hour < opt.peak_end_h;
    double current = 0.0;
    if (peak) {
      double want = std::max(pack.cell_current(std::max(0.0, s.load_w - s.pv_w)), opt.peak_discharge_c * ecm.capacity_ah);
      current = std::min(want, ledger.max_discharge(opt.soc_floor, dt));
    } else if (s.pv_w > s.load_w) {
      current = -std::min(pack.cell_current(s.pv_w - s.load_w), ledger.max_charge(1.0, dt));
    } else if (ledger.soc() < opt.soc_high) {
      current = -std::min(opt.grid_charge_c * ecm.capacity_ah, ledger.max_charge(opt.soc_high, dt));
    }
    ledger.apply(current, dt);
    out.push_back({s.time_s, current, s.temp_k});
  }
  return CurrentProfile(std::move(out), trace.duration_s, false);
}

struct SyntheticTraceOptions {
  int days = 365;
  double step_s = 900.0;
  double pv_peak_w = 5000.0;
  double base_load_w = 350.0;
  double evening_load_w = 2200.0;
  double morning_load_w = 1200.0;
  double home_temp_c = 22.0;
  std::uint64_t seed = 1;
};

/// Deterministic PV/load year: clear-sky-like PV with a seasonal envelope,
/// base load with morning and evening peaks, multiplicative day-to-day
/// variation drawn from the seeded generator, constant indoor temperature.
inline HouseholdTrace synthetic_household_trace(const SyntheticTraceOptions& opt = {}) {
  if (opt.days < 1 || !(opt.step_s > 0.0)) throw DomainError("synthetic_household_trace: invalid length");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> weather(0.3, 1.0);
  std::uniform_real_distribution<double> usage(0.8, 1.2);
  HouseholdTrace trace;
  const auto per_day = static_cast<std::size_t>(std::llround(kSecondsPerDay / opt.step_s));
  const double temp_k = celsius_to_kelvin(opt.home_temp_c);
  for (int d = 0; d < opt.days; ++d) {
    const double cloud = weather(rng);
    const double use = usage(rng);
    const double season = 0.65 + 0.35 * std::cos(2.0 * std::numbers::pi * (d - 172) / 365.0);
    const double daylight_h = 12.0 + 3.0 * std::cos(2.0 * std::numbers::pi * (d - 172) / 365.0);
    const double sunrise = 12.0 - daylight_h / 2.0;
    for (std::size_t k = 0; k < per_day; ++k) {
      const double t = d * kSecondsPerDay + static_cast<double>(k) * opt.step_s;
      const double h = static_cast<double>(k) * opt.step_s / kSecondsPerHour;
      double pv = 0.0;
      if (h > sunrise && h < sunrise + daylight_h)
        pv = opt.pv_peak_w * season * cloud * std::sin(std::numbers::pi * (h - sunrise) / daylight_h);
      auto bump = [&](double centre, double width) { return std::exp(-0.5 * std::pow((h - centre) / width, 2.0)); };
      double load = use * (opt.base_load_w + opt.morning_load_w * bump(7.5, 1.0) + opt.evening_load_w * bump(19.0, 1.5));
      trace.samples.push_back({t, pv, load, temp_k});
    }
  }
  trace.duration_s = opt.days * kSecondsPerDay;
  return trace;
}

// ---------------------------------------------------------------------------
// Simulation and end of life

struct TrajectoryPoint {
  double time_s;
  double q_sei;
  double q_am;
  double q_total;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct FadeTrajectory {
  std::vector<TrajectoryPoint> points;
  std::string label;

  friend bool operator==(const FadeTrajectory&, const FadeTrajectory&) = default;
};

struct SimulationOptions {
  double initial_soc = 0.5;
  double horizon_s = kSecondsPerYear;
  double record_every_s = kSecondsPerDay;
  double max_step_s = 60.0;
  bool record_soc = true;
};

struct SimulationResult {
  FadeTrajectory trajectory;
  /// SOC at the start of every simulation step.
  std::vector<SocSample> soc_series;
  SaturationStats saturation;
  EcmState final_ecm;
  FadeState final_fade;

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Coupled ECM + aging run from a fresh cell over [0, horizon], sampling the
/// fade state at t = 0, every record_every_s, and at the horizon.
inline SimulationResult simulate(const CurrentProfile& profile, const BatteryParams& params, const XMap& map,
                                 const EcmParams& ecm, const SimulationOptions& opt = {}) {
  if (!(opt.horizon_s > 0.0)) throw DomainError("simulate: horizon must be positive");
  if (!(opt.record_every_s > 0.0)) throw DomainError("simulate: record interval must be positive");
  params.validate();
  ecm.validate();
  CoupledSimulator sim(profile, params, map, ecm, opt.initial_soc, opt.max_step_s);
  SimulationResult out;
  if (opt.record_soc) sim.record_soc(&out.soc_series);
  out.trajectory.points.push_back({0.0, 0.0, 0.0, 0.0});
  for (std::size_t k = 1;; ++k) {
    double t = std::min(static_cast<double>(k) * opt.record_every_s, opt.horizon_s);
    sim.advance_to(t);
    const auto& f = sim.fade();
    out.trajectory.points.push_back({t, f.q_sei, f.q_am, f.q_total()});
    if (t >= opt.horizon_s) break;
  }
  out.saturation = sim.saturation();
  out.final_ecm = sim.ecm_state();
  out.final_fade = sim.fade();
  return out;
}

struct EolEstimate {
  double years_to_eol;
  double threshold;
  /// Fade model q(n) = sqrt_coefficient * sqrt(n) + linear_coefficient * n, n in years.
  double linear_coefficient;
  double sqrt_coefficient;
};

/// How the fade model is fitted to a trajectory.
enum class EolFit {
  /// q_sei ~ a sqrt(n) and q_am ~ b n, each by one-term least squares.
  per_mechanism,
  /// q_total ~ a sqrt(n) + b n by two-term least squares.
  total,
};

struct EolOptions {
  double threshold = 0.80;
  /// Shortest trajectory span accepted for extrapolation.
  double min_window_s = kSecondsPerYear;
  EolFit fit = EolFit::per_mechanism;
};

/// Fits a sqrt(n) + b n (n in years, no intercept) to a fade trajectory and
/// returns the positive root of a sqrt(n) + b n = 100 (1 - threshold).
inline EolEstimate extrapolate_eol(const FadeTrajectory& trajectory, const EolOptions& opt = {}) {
  if (!(opt.threshold > 0.0 && opt.threshold < 1.0)) throw DomainError("extrapolate_eol: threshold outside (0, 1)");
  const auto& pts = trajectory.points;
  if (pts.size() < 2) throw ValidationError("extrapolate_eol: trajectory needs at least two points");
  const double span = pts.back().time_s - pts.front().time_s;
  if (span < opt.min_window_s * (1.0 - 1e-12))
    throw ValidationError("extrapolate_eol: trajectory spans less than the minimum window");
  if (!(pts.back().q_total > 0.0)) throw NoEolError("extrapolate_eol: no capacity fade over the window");

  double suu = 0.0, sun = 0.0, snn = 0.0, suq = 0.0, snq = 0.0;
  double su_sei = 0.0, sn_am = 0.0;
  for (const auto& p : pts) {
    double n = p.time_s / kSecondsPerYear;
    double u = std::sqrt(n);
    suu += u * u;
    sun += u * n;
    snn += n * n;
    suq += u * p.q_total;
    snq += n * p.q_total;
    su_sei += u * p.q_sei;
    sn_am += n * p.q_am;
  }
  double a;
  double b;
  if (opt.fit == EolFit::per_mechanism) {
    a = su_sei / suu;
    b = sn_am / snn;
  } else {
    const double det = suu * snn - sun * sun;
    if (std::abs(det) > 1e-14 * suu * snn) {
      a = (suq * snn - snq * sun) / det;
      b = (snq * suu - suq * sun) / det;
    } else {
      // Single nonzero time: both columns are proportional; use the sqrt term.
      a = suq / suu;
      b = 0.0;
    }
  }
  const double scale = std::max(std::abs(pts.back().q_total), 1e-300);
  if (std::abs(a) < 1e-12 * scale && std::abs(b) < 1e-12 * scale)
    throw NoEolError("extrapolate_eol: degenerate fit, both coefficients vanish");

  const double target = 100.0 * (1.0 - opt.threshold);
  // b u^2 + a u - target = 0, smallest positive root.
  double u;
  if (b == 0.0) {
    if (!(a > 0.0)) throw NoEolError("extrapolate_eol: fitted fade does not grow");
    u = target / a;
  } else {
    const double disc = a * a + 4.0 * b * target;
    if (disc < 0.0) throw NoEolError("extrapolate_eol: fitted fade never reaches the threshold");
    const double root = std::sqrt(disc);
    const double denom = a + root;
    if (!(denom > 0.0)) throw NoEolError("extrapolate_eol: fitted fade never reaches the threshold");
    u = 2.0 * target / denom;
  }
  const double years = u * u;
  if (!(years > 0.0) || !std::isfinite(years)) throw NoEolError("extrapolate_eol: no positive end-of-life time");
  return {years, opt.threshold, b, a};
}

// ---------------------------------------------------------------------------
// Usage histograms

/// Time-weighted occupancy over bins [edges[i], edges[i+1]). Values below
/// the first edge count in the first bin, values at or above the last edge
/// in the last bin, so all time is conserved.
struct Histogram {
  std::vector<double> edges;
  std::vector<double> seconds;

  explicit Histogram(std::vector<double> e) : edges(std::move(e)) {
    if (edges.size() < 2) throw DomainError("Histogram: need at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i)
      if (!(edges[i] > edges[i - 1])) throw DomainError("Histogram: edges must be strictly increasing");
    seconds.assign(edges.size() - 1, 0.0);
  }

  [[nodiscard]] std::size_t bin_of(double v) const noexcept {
    if (v < edges.front()) return 0;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    auto i = static_cast<std::size_t>(it - edges.begin());
    return std::min(i - 1, seconds.size() - 1);
  }

  void add(double value, double dt) noexcept { seconds[bin_of(value)] += dt; }

  [[nodiscard]] double total() const noexcept {
    double s = 0.0;
    for (double v : seconds) s += v;
    return s;
  }

  /// Seconds in bins whose lower edge is >= threshold.
  [[nodiscard]] double mass_at_or_above(double threshold) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < seconds.size(); ++i)
      if (edges[i] >= threshold) s += seconds[i];
    return s;
  }
};

/// `count` equal-width bins spanning [lo, hi].
inline std::vector<double> uniform_edges(double lo, double hi, std::size_t count) {
  if (count == 0 || !(hi > lo)) throw DomainError("uniform_edges: invalid range");
  std::vector<double> e(count + 1);
  for (std::size_t i = 0; i <= count; ++i) e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count);
  e.back() = hi;
  return e;
}

struct UsageHistograms {
  Histogram c_rate;
  Histogram soc;
};

/// C-rate (I / capacity, discharge positive) and SOC occupancy over
/// [0, horizon]. The SOC series is zero-order hold; its last entry lasts
/// until the horizon.
inline UsageHistograms usage_histograms(const CurrentProfile& profile, std::span<const SocSample> soc_series,
                                        double capacity_ah, double horizon_s, std::vector<double> c_rate_edges,
                                        std::vector<double> soc_edges) {
  if (soc_series.empty()) throw ValidationError("usage_histograms: empty SOC series");
  if (!(capacity_ah > 0.0)) throw DomainError("usage_histograms: capacity must be positive");
  if (!(horizon_s > 0.0)) throw DomainError("usage_histograms: horizon must be positive");
  UsageHistograms h{Histogram(std::move(c_rate_edges)), Histogram(std::move(soc_edges))};
  for_each_segment(profile, 0.0, horizon_s,
                   [&](double a, double b, const ProfileSample& s) { h.c_rate.add(s.current_a / capacity_ah, b - a); });
  for (std::size_t i = 0; i < soc_series.size(); ++i) {
    const double begin = soc_series[i].time_s;
    const double end = i + 1 < soc_series.size() ? soc_series[i + 1].time_s : horizon_s;
    if (i > 0 && !(begin > soc_series[i - 1].time_s))
      throw ValidationError("usage_histograms: SOC series times not strictly increasing");
    const double b = std::min(end, horizon_s);
    if (b > begin) h.soc.add(soc_series[i].soc, b - begin);
  }
  // The SOC series starts at the first sample; time before it is attributed
  // to the first value.
  if (soc_series.front().time_s > 0.0) h.soc.add(soc_series.front().soc, std::min(soc_series.front().time_s, horizon_s));
  return h;
}

}  // namespace capfade

#endif
