#ifndef CAPFADE_PROFILE_HPP
#define CAPFADE_PROFILE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capfade/error.hpp"
#include "capfade/units.hpp"

namespace capfade {

/// Current and temperature held from `time_s` until the next sample.
/// Positive current discharges the cell.
struct ProfileSample {
  double time_s;
  double current_a;
  double temp_k;

  friend bool operator==(const ProfileSample&, const ProfileSample&) = default;
};

/// Zero-order-hold current/temperature series.
///
/// A periodic profile repeats every `duration` seconds. A non-periodic
/// profile holds its last sample past `duration`.
class CurrentProfile {
 public:
  CurrentProfile(std::vector<ProfileSample> samples, double duration_s, bool periodic)
      : samples_(std::move(samples)), duration_(duration_s), periodic_(periodic) {
    if (samples_.empty()) throw ValidationError("CurrentProfile: no samples");
    if (samples_.front().time_s != 0.0) throw ValidationError("CurrentProfile: first sample must be at t = 0");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const auto& s = samples_[i];
      if (!std::isfinite(s.current_a)) throw ValidationError("CurrentProfile: non-finite current at sample " + std::to_string(i + 1));
      if (!(s.temp_k > 0.0)) throw ValidationError("CurrentProfile: temperature must be positive at sample " + std::to_string(i + 1));
      if (i > 0 && !(s.time_s > samples_[i - 1].time_s))
        throw ValidationError("CurrentProfile: times not strictly increasing at sample " + std::to_string(i + 1));
    }
    if (!(duration_ >= samples_.back().time_s) || !std::isfinite(duration_))
      throw ValidationError("CurrentProfile: duration shorter than last sample time");
    if (periodic_ && !(duration_ > samples_.back().time_s))
      throw ValidationError("CurrentProfile: period must exceed the last sample time");
  }

  /// One sample held for `duration_s`.
  static CurrentProfile constant(double current_a, double temp_k, double duration_s, bool periodic = false) {
    return CurrentProfile({{0.0, current_a, temp_k}}, duration_s, periodic);
  }

  [[nodiscard]] std::span<const ProfileSample> samples() const noexcept { return samples_; }
  [[nodiscard]] double duration() const noexcept { return duration_; }
  [[nodiscard]] bool periodic() const noexcept { return periodic_; }
  /// Period length; only meaningful when periodic().
  [[nodiscard]] double period() const noexcept { return duration_; }

  /// Every current multiplied by `factor`; times and temperatures unchanged.
  [[nodiscard]] CurrentProfile scaled(double factor) const {
    auto s = samples_;
    for (auto& p : s) p.current_a *= factor;
    return CurrentProfile(std::move(s), duration_, periodic_);
  }

  friend bool operator==(const CurrentProfile&, const CurrentProfile&) = default;

 private:
  std::vector<ProfileSample> samples_;
  double duration_;
  bool periodic_;
};

/// A maximal interval over which the profile input is constant.
struct Segment {
  double begin;
  double end;
  const ProfileSample* sample;
};

/// Forward iterator over the constant segments of a profile, with periodic
/// tiling. Segment boundaries are computed from absolute period offsets so
/// long runs do not accumulate rounding drift.
class SegmentCursor {
 public:
  SegmentCursor(const CurrentProfile& profile, double t) : profile_(&profile) {
    const auto s = profile.samples();
    if (profile.periodic()) {
      cycle_ = std::floor(t / profile.period());
      if (cycle_ < 0.0) cycle_ = 0.0;
      double local = t - cycle_ * profile.period();
      index_ = locate(s, local);
    } else {
      index_ = locate(s, t);
    }
    // Rounding can place t just past the computed end.
    while (t >= current().end) advance();
  }

  [[nodiscard]] Segment current() const noexcept {
    const auto s = profile_->samples();
    double offset = profile_->periodic() ? cycle_ * profile_->period() : 0.0;
    double begin = offset + s[index_].time_s;
    double end;
    if (index_ + 1 < s.size()) {
      end = offset + s[index_ + 1].time_s;
    } else if (profile_->periodic()) {
      end = (cycle_ + 1.0) * profile_->period();
    } else {
      end = std::numeric_limits<double>::infinity();
    }
    return {begin, end, &s[index_]};
  }

  void advance() noexcept {
    const auto s = profile_->samples();
    if (index_ + 1 < s.size()) {
      ++index_;
    } else if (profile_->periodic()) {
      index_ = 0;
      cycle_ += 1.0;
    }
  }

 private:
  static std::size_t locate(std::span<const ProfileSample> s, double t) noexcept {
    auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const ProfileSample& p) { return v < p.time_s; });
    if (it == s.begin()) return 0;
    return static_cast<std::size_t>(it - s.begin()) - 1;
  }

  const CurrentProfile* profile_;
  std::size_t index_ = 0;
  double cycle_ = 0.0;
};

/// Calls fn(begin, end, sample) for each constant piece of the profile
/// clipped to [t0, t1].
template <typename Fn>
void for_each_segment(const CurrentProfile& profile, double t0, double t1, Fn&& fn) {
  if (!(t1 > t0)) return;
  SegmentCursor cursor(profile, t0);
  double t = t0;
  while (t < t1) {
    Segment seg = cursor.current();
    double end = std::min(seg.end, t1);
    if (end > t) fn(t, end, *seg.sample);
    t = end;
    cursor.advance();
  }
}

/// Charge throughput sum(|I| dt) / 3600 in Ah over one period (periodic) or
/// over [0, duration] (non-periodic).
inline double throughput(const CurrentProfile& profile) {
  double ah = 0.0;
  for_each_segment(profile, 0.0, profile.duration(),
                   [&](double a, double b, const ProfileSample& s) { ah += std::abs(s.current_a) * (b - a); });
  return ah / kSecondsPerHour;
}

/// Net discharged charge sum(I dt) / 3600 in Ah over one period or duration.
inline double net_charge(const CurrentProfile& profile) {
  double ah = 0.0;
  for_each_segment(profile, 0.0, profile.duration(),
                   [&](double a, double b, const ProfileSample& s) { ah += s.current_a * (b - a); });
  return ah / kSecondsPerHour;
}

/// Same signal on a grid no coarser than max_dt (ZOH samples are split).
inline CurrentProfile resample(const CurrentProfile& profile, double max_dt) {
  if (!(max_dt > 0.0)) throw DomainError("resample: max_dt must be positive");
  std::vector<ProfileSample> out;
  const auto s = profile.samples();
  for (std::size_t i = 0; i < s.size(); ++i) {
    double end = i + 1 < s.size() ? s[i + 1].time_s : profile.duration();
    double span = end - s[i].time_s;
    auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(span / max_dt)));
    for (std::size_t k = 0; k < pieces; ++k) {
      double t = s[i].time_s + span * static_cast<double>(k) / static_cast<double>(pieces);
      if (k > 0 && !(t > out.back().time_s)) continue;
      out.push_back({t, s[i].current_a, s[i].temp_k});
    }
  }
  return CurrentProfile(std::move(out), profile.duration(), profile.periodic());
}

/// `n` periods of a periodic profile laid end to end as one periodic profile.
inline CurrentProfile tile(const CurrentProfile& profile, std::size_t n) {
  if (!profile.periodic()) throw DomainError("tile: profile is not periodic");
  if (n == 0) throw DomainError("tile: need at least one period");
  std::vector<ProfileSample> out;
  out.reserve(profile.samples().size() * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& s : profile.samples())
      out.push_back({s.time_s + static_cast<double>(k) * profile.period(), s.current_a, s.temp_k});
  }
  return CurrentProfile(std::move(out), profile.period() * static_cast<double>(n), true);
}

// ---------------------------------------------------------------------------
// Generators

/// Constant-current charge/rest/discharge/rest cycle.
struct CycleConfig {
  double capacity_ah = 2.3;
  double soc_low = 0.20;
  double soc_high = 0.95;
  double charge_c = 0.5;
  double discharge_c = 0.5;
  double rest_s = 0.0;
  double temp_k = celsius_to_kelvin(25.0);
  /// Ah moved per cycle (charge plus discharge). When unset it follows from
  /// the SOC window: 2 (soc_high - soc_low) capacity.
  std::optional<double> throughput_ah;
};

/// Periodic CC profile starting at soc_low with a charge leg.
inline CurrentProfile generate_cycle(const CycleConfig& cycle) {
  if (!(cycle.soc_low >= 0.0 && cycle.soc_low < cycle.soc_high && cycle.soc_high <= 1.0))
    throw DomainError("generate_cycle: require 0 <= soc_low < soc_high <= 1");
  if (!(cycle.charge_c > 0.0) || !(cycle.discharge_c > 0.0))
    throw DomainError("generate_cycle: C-rates must be positive");
  if (!(cycle.capacity_ah > 0.0)) throw DomainError("generate_cycle: capacity must be positive");
  if (!(cycle.rest_s >= 0.0)) throw DomainError("generate_cycle: rest must be non-negative");
  if (!(cycle.temp_k > 0.0)) throw DomainError("generate_cycle: temperature must be positive kelvin");
  double leg_ah = cycle.throughput_ah ? *cycle.throughput_ah / 2.0 : (cycle.soc_high - cycle.soc_low) * cycle.capacity_ah;
  if (!(leg_ah > 0.0)) throw DomainError("generate_cycle: throughput must be positive");

  const double i_charge = cycle.charge_c * cycle.capacity_ah;
  const double i_discharge = cycle.discharge_c * cycle.capacity_ah;
  const double t_charge = leg_ah / i_charge * kSecondsPerHour;
  const double t_discharge = leg_ah / i_discharge * kSecondsPerHour;

  std::vector<ProfileSample> s;
  double t = 0.0;
  s.push_back({t, -i_charge, cycle.temp_k});
  t += t_charge;
  if (cycle.rest_s > 0.0) {
    s.push_back({t, 0.0, cycle.temp_k});
    t += cycle.rest_s;
  }
  s.push_back({t, i_discharge, cycle.temp_k});
  t += t_discharge;
  if (cycle.rest_s > 0.0) {
    s.push_back({t, 0.0, cycle.temp_k});
    t += cycle.rest_s;
  }
  return CurrentProfile(std::move(s), t, true);
}

namespace detail {

struct HevPulse {
  double duration_s;
  double c_rate;  // positive = discharge
};

// Mixed 1C/2C/4C pulses with short rests. Discharge and charge legs carry
// the same charge, so the cycle is charge-sustaining; unscaled throughput is
// 720 C-seconds per 460 s cycle.
inline constexpr HevPulse kHevShape[] = {
    {30.0, 4.0}, {5.0, 0.0},  {60.0, -2.0}, {5.0, 0.0},  {120.0, 1.0}, {10.0, 0.0},
    {30.0, -4.0}, {5.0, 0.0}, {60.0, 2.0},  {5.0, 0.0},  {120.0, -1.0}, {10.0, 0.0},
};

}  // namespace detail

/// Fixed-shape HEV-style pulse cycle with currents scaled so one period moves
/// exactly `throughput_target_ah` (sum of |I| dt).
inline CurrentProfile generate_hev_cycle(double capacity_ah, double throughput_target_ah, double temp_k) {
  if (!(capacity_ah > 0.0)) throw DomainError("generate_hev_cycle: capacity must be positive");
  if (!(throughput_target_ah > 0.0)) throw DomainError("generate_hev_cycle: throughput target must be positive");
  if (!(temp_k > 0.0)) throw DomainError("generate_hev_cycle: temperature must be positive kelvin");
  double base_c_seconds = 0.0;
  for (const auto& p : detail::kHevShape) base_c_seconds += std::abs(p.c_rate) * p.duration_s;
  const double base_ah = base_c_seconds * capacity_ah / kSecondsPerHour;
  const double scale = throughput_target_ah / base_ah;

  std::vector<ProfileSample> s;
  double t = 0.0;
  for (const auto& p : detail::kHevShape) {
    s.push_back({t, p.c_rate * capacity_ah * scale, temp_k});
    t += p.duration_s;
  }
  return CurrentProfile(std::move(s), t, true);
}

}  // namespace capfade

#endif
