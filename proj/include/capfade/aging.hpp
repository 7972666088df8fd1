#ifndef CAPFADE_AGING_HPP
#define CAPFADE_AGING_HPP

#include <cmath>
#include <string>

#include "capfade/error.hpp"
#include "capfade/units.hpp"
#include "capfade/xmap.hpp"

namespace capfade {

/// Nominal capacity plus the fitted SEI and LAM aging coefficients.
struct BatteryParams {
  double nominal_capacity_ah;
  double k_sei;  // 1/s^0.5
  double e_sei;  // J/mol
  double k_am;   // 1/Ah
  double e_am;   // J/mol

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string("BatteryParams: ") + name + " must be positive and finite");
    };
    positive(nominal_capacity_ah, "nominal_capacity_ah");
    positive(k_sei, "k_sei");
    positive(e_sei, "e_sei");
    positive(k_am, "k_am");
    positive(e_am, "e_am");
  }

  friend bool operator==(const BatteryParams&, const BatteryParams&) = default;
};

/// Accumulated capacity loss, in percent of nominal capacity.
struct FadeState {
  double age_s = 0.0;
  double q_sei = 0.0;
  double q_am = 0.0;

  [[nodiscard]] double q_total() const noexcept { return q_sei + q_am; }

  friend bool operator==(const FadeState&, const FadeState&) = default;
};

/// k * exp(-e / (R * temp_k)).
inline double arrhenius(double k, double e, double temp_k) {
  if (!(temp_k > 0.0)) throw DomainError("arrhenius: temperature must be positive kelvin");
  return k * std::exp(-e / (kGasConstant * temp_k));
}

/// sqrt(t1) - sqrt(t0) without cancellation for t1 close to t0.
inline double sqrt_difference(double t0, double t1) noexcept {
  const double s = std::sqrt(t1) + std::sqrt(t0);
  return s > 0.0 ? (t1 - t0) / s : 0.0;
}

/// SEI capacity loss accumulated between absolute cell ages t0 and t1 at
/// constant temperature and X: the integral of
///   k_sei exp(-E_sei/RT) / (2 (1 + X) sqrt(t))
/// which is arrhenius / (1 + X) * (sqrt(t1) - sqrt(t0)).
inline double q_sei_increment(const BatteryParams& params, double x, double temp_k, double t0, double t1) {
  if (!(t0 >= 0.0)) throw DomainError("q_sei_increment: t0 must be non-negative");
  if (!(t1 >= t0)) throw DomainError("q_sei_increment: t1 < t0");
  if (!(1.0 + x > 0.0)) throw ModelValidityError("q_sei_increment: 1 + X must be positive");
  return arrhenius(params.k_sei, params.e_sei, temp_k) / (1.0 + x) * sqrt_difference(t0, t1);
}

/// LAM capacity loss from |current| * dt of throughput at the given SOC:
/// arrhenius(k_am, e_am, T) * soc * |I| * dt / 3600.
inline double q_am_increment(const BatteryParams& params, double soc, double current_a, double temp_k,
                             double dt_s) {
  if (!(dt_s >= 0.0)) throw DomainError("q_am_increment: dt must be non-negative");
  if (!(soc >= 0.0 && soc <= 1.0)) throw DomainError("q_am_increment: soc outside [0, 1]");
  return arrhenius(params.k_am, params.e_am, temp_k) * soc * std::abs(current_a) * dt_s / kSecondsPerHour;
}

/// Advances the fade state by dt under constant (soc, current, temp). The SEI
/// term integrates over the absolute age window [age, age + dt].
inline FadeState step(const FadeState& state, const BatteryParams& params, const XMap& map, double soc,
                      double current_a, double temp_k, double dt_s) {
  if (!(dt_s > 0.0)) throw DomainError("step: dt must be positive");
  const double x = map.lookup(soc, temp_k);
  FadeState next = state;
  next.age_s = state.age_s + dt_s;
  next.q_sei += q_sei_increment(params, x, temp_k, state.age_s, next.age_s);
  next.q_am += q_am_increment(params, soc, current_a, temp_k, dt_s);
  return next;
}

}  // namespace capfade

#endif
