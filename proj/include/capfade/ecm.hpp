#ifndef CAPFADE_ECM_HPP
#define CAPFADE_ECM_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "capfade/error.hpp"
#include "capfade/units.hpp"

namespace capfade {

struct OcvPoint {
  double soc;
  double volts;
};

/// First-order equivalent circuit: series resistance r0 plus one r1 || c1
/// branch, with an open-circuit voltage table over SOC.
struct EcmParams {
  double r0;           // ohm
  double r1;           // ohm
  double c1;           // farad
  double capacity_ah;  // Ah
  std::vector<OcvPoint> ocv_curve;

  void validate() const {
    if (!(r0 >= 0.0)) throw ConfigError("EcmParams: r0 must be >= 0");
    if (!(r1 > 0.0)) throw ConfigError("EcmParams: r1 must be > 0");
    if (!(c1 > 0.0)) throw ConfigError("EcmParams: c1 must be > 0");
    if (!(capacity_ah > 0.0)) throw ConfigError("EcmParams: capacity_ah must be > 0");
    if (ocv_curve.size() < 2) throw ConfigError("EcmParams: OCV table needs at least two points");
    for (std::size_t i = 1; i < ocv_curve.size(); ++i) {
      if (!(ocv_curve[i].soc > ocv_curve[i - 1].soc) || !(ocv_curve[i].volts > ocv_curve[i - 1].volts))
        throw ConfigError("EcmParams: OCV table must be strictly increasing in soc and voltage");
    }
    if (ocv_curve.front().soc != 0.0 || ocv_curve.back().soc != 1.0)
      throw ConfigError("EcmParams: OCV table must cover soc 0 to 1");
  }
};

struct EcmState {
  double soc = 0.5;
  double v1 = 0.0;  // RC branch voltage

  friend bool operator==(const EcmState&, const EcmState&) = default;
};

struct EcmStepResult {
  EcmState state;
  double terminal_voltage;
  /// SOC hit 0 or 1 during the step and was clamped.
  bool saturated;
};

/// Open-circuit voltage, piecewise linear in the OCV table.
inline double ocv(const EcmParams& params, double soc) {
  if (!(soc >= 0.0 && soc <= 1.0)) throw DomainError("ocv: soc outside [0, 1]");
  const auto& c = params.ocv_curve;
  if (c.empty()) throw ConfigError("ocv: empty OCV table");
  auto it = std::upper_bound(c.begin(), c.end(), soc, [](double s, const OcvPoint& p) { return s < p.soc; });
  if (it == c.begin()) return c.front().volts;
  if (it == c.end()) return c.back().volts;
  const auto& lo = *(it - 1);
  const auto& hi = *it;
  if (soc == lo.soc) return lo.volts;
  double u = (soc - lo.soc) / (hi.soc - lo.soc);
  return (1.0 - u) * lo.volts + u * hi.volts;
}

/// One zero-order-hold step. Positive current discharges the cell.
inline EcmStepResult ecm_step(const EcmState& state, const EcmParams& params, double current_a, double dt_s) {
  if (!(dt_s > 0.0)) throw DomainError("ecm_step: dt must be positive");
  EcmStepResult out{state, 0.0, false};
  double soc = state.soc - current_a * dt_s / (kSecondsPerHour * params.capacity_ah);
  if (soc < 0.0 || soc > 1.0) {
    out.saturated = true;
    soc = std::clamp(soc, 0.0, 1.0);
  }
  const double decay = std::exp(-dt_s / (params.r1 * params.c1));
  out.state.soc = soc;
  out.state.v1 = state.v1 * decay + params.r1 * (1.0 - decay) * current_a;
  out.terminal_voltage = ocv(params, soc) - current_a * params.r0 - out.state.v1;
  return out;
}

}  // namespace capfade

#endif
