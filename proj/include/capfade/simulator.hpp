#ifndef CAPFADE_SIMULATOR_HPP
#define CAPFADE_SIMULATOR_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "capfade/aging.hpp"
#include "capfade/ecm.hpp"
#include "capfade/error.hpp"
#include "capfade/profile.hpp"
#include "capfade/xmap.hpp"

namespace capfade {

/// SOC held from `time_s` until the next entry.
struct SocSample {
  double time_s;
  double soc;

  friend bool operator==(const SocSample&, const SocSample&) = default;
};

struct SaturationStats {
  std::size_t steps = 0;
  std::size_t saturated_steps = 0;
  double saturated_seconds = 0.0;

  friend bool operator==(const SaturationStats&, const SaturationStats&) = default;
};

/// Feedforward ECM + aging time stepper.
///
/// Each step holds the profile input constant, advances the ECM, and feeds
/// the mean of the pre- and post-step ECM SOC together with the imposed
/// current and temperature into the aging step. Aging never feeds back into
/// the ECM. Steps break at profile sample boundaries, at advance_to targets,
/// and are at most max_step_s long.
class CoupledSimulator {
 public:
  CoupledSimulator(const CurrentProfile& profile, const BatteryParams& params, const XMap& map, const EcmParams& ecm,
                   double initial_soc, double max_step_s = 60.0)
      : profile_(&profile),
        params_(&params),
        map_(&map),
        ecm_params_(&ecm),
        cursor_(profile, 0.0),
        max_step_(max_step_s) {
    if (!(initial_soc >= 0.0 && initial_soc <= 1.0)) throw DomainError("simulate: initial soc outside [0, 1]");
    if (!(max_step_s > 0.0)) throw DomainError("simulate: max step must be positive");
    ecm_state_.soc = initial_soc;
  }

  /// Seeds a resumed run; time and fade age must agree.
  void reset_aging(const FadeState& fade) { fade_ = fade; }

  void advance_to(double target) {
    while (time_ < target) {
      Segment seg = cursor_.current();
      while (!(seg.end > time_)) {
        cursor_.advance();
        seg = cursor_.current();
      }
      double next = std::min({target, seg.end, time_ + max_step_});
      double dt = next - time_;
      if (!(dt > 0.0)) {
        time_ = next;
        continue;
      }
      const ProfileSample& in = *seg.sample;
      const double soc_before = ecm_state_.soc;
      auto r = ecm_step(ecm_state_, *ecm_params_, in.current_a, dt);
      ecm_state_ = r.state;
      terminal_voltage_ = r.terminal_voltage;
      ++stats_.steps;
      if (r.saturated) {
        ++stats_.saturated_steps;
        stats_.saturated_seconds += dt;
      }
      if (soc_observer_) soc_observer_->push_back({time_, soc_before});
      const double soc_mid = 0.5 * (soc_before + ecm_state_.soc);
      fade_ = step(fade_, *params_, *map_, soc_mid, in.current_a, in.temp_k, dt);
      time_ = next;
    }
  }

  /// Appends (step start time, SOC at step start) for every step taken.
  void record_soc(std::vector<SocSample>* sink) noexcept { soc_observer_ = sink; }

  [[nodiscard]] double time() const noexcept { return time_; }
  [[nodiscard]] const FadeState& fade() const noexcept { return fade_; }
  [[nodiscard]] const EcmState& ecm_state() const noexcept { return ecm_state_; }
  [[nodiscard]] double terminal_voltage() const noexcept { return terminal_voltage_; }
  [[nodiscard]] const SaturationStats& saturation() const noexcept { return stats_; }

 private:
  const CurrentProfile* profile_;
  const BatteryParams* params_;
  const XMap* map_;
  const EcmParams* ecm_params_;
  SegmentCursor cursor_;
  double max_step_;
  double time_ = 0.0;
  FadeState fade_;
  EcmState ecm_state_;
  double terminal_voltage_ = std::numeric_limits<double>::quiet_NaN();
  SaturationStats stats_;
  std::vector<SocSample>* soc_observer_ = nullptr;
};

}  // namespace capfade

#endif
