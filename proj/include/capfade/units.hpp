#ifndef CAPFADE_UNITS_HPP
#define CAPFADE_UNITS_HPP

namespace capfade {

/// Universal gas constant, J/(mol K).
inline constexpr double kGasConstant = 8.314;

inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kSecondsPerDay = 86400.0;
/// 365-day year.
inline constexpr double kSecondsPerYear = 365.0 * kSecondsPerDay;

inline constexpr double kZeroCelsius = 273.15;

constexpr double celsius_to_kelvin(double celsius) noexcept { return celsius + kZeroCelsius; }
constexpr double kelvin_to_celsius(double kelvin) noexcept { return kelvin - kZeroCelsius; }

}  // namespace capfade

#endif
