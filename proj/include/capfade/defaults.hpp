#ifndef CAPFADE_DEFAULTS_HPP
#define CAPFADE_DEFAULTS_HPP

#include <vector>

#include "capfade/aging.hpp"
#include "capfade/ecm.hpp"
#include "capfade/units.hpp"
#include "capfade/xmap.hpp"

/// Shipped parameter sets for the A123 2.3 Ah 26650 LFP cell.
namespace capfade::lfp26650 {

inline constexpr double kNominalCapacityAh = 2.3;

/// Fitted SEI (k, E) and LAM (k, E) coefficients.
inline BatteryParams battery_params() { return {kNominalCapacityAh, 7350.0, 39333.0, 1.1798, 39111.0}; }

/// Calibrated X at seven storage conditions.
inline std::vector<XKnot> x_knots() {
  return {
      {0.30, celsius_to_kelvin(30.0), 1.6227},  {0.30, celsius_to_kelvin(45.0), 1.0331},
      {0.50, celsius_to_kelvin(25.0), 0.6970},  {0.50, celsius_to_kelvin(45.0), 0.2841},
      {1.00, celsius_to_kelvin(25.0), 0.0482},  {1.00, celsius_to_kelvin(45.0), 0.0331},
      {1.00, celsius_to_kelvin(60.0), -0.1433},
  };
}

inline XMap x_map() { return XMap(x_knots()); }

/// Illustrative ECM values: flat LFP plateau, 10 mOhm series resistance,
/// 20 s RC time constant. Not fitted to measurements.
inline EcmParams ecm_params() {
  return {0.010,
          0.010,
          2000.0,
          kNominalCapacityAh,
          {{0.00, 2.80},
           {0.05, 3.10},
           {0.10, 3.20},
           {0.20, 3.25},
           {0.30, 3.28},
           {0.40, 3.29},
           {0.50, 3.30},
           {0.60, 3.31},
           {0.70, 3.32},
           {0.80, 3.33},
           {0.90, 3.34},
           {0.95, 3.37},
           {1.00, 3.55}}};
}

}  // namespace capfade::lfp26650

#endif
