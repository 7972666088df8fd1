#ifndef CAPFADE_XMAP_HPP
#define CAPFADE_XMAP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "capfade/error.hpp"
#include "capfade/interp.hpp"

namespace capfade {

/// One calibrated value of the lumped SEI overpotential parameter X.
struct XKnot {
  double soc;     // fraction in [0, 1]
  double temp_k;  // kelvin
  double x;
};

/// Scattered (SOC, temperature) -> X lookup.
///
/// Knots need not fill the SOC x temperature grid. On construction the grid
/// spanned by the distinct knot SOCs and temperatures is completed row by
/// row: within each SOC row, missing temperatures are filled by 1-D linear
/// interpolation (or linear extrapolation from the nearest two knots) along
/// temperature; a row with a single knot is constant. Queries are then
/// bilinear on the completed grid, extrapolating linearly from the boundary
/// cells outside the hull. Every result is clamped so 1 + X >= kMinDenominator.
class XMap {
 public:
  /// Lower bound enforced on the SEI denominator 1 + X.
  static constexpr double kMinDenominator = 0.05;

  explicit XMap(std::vector<XKnot> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw ConfigError("XMap: at least one knot is required");
    for (const auto& k : knots_) {
      if (!(k.soc >= 0.0 && k.soc <= 1.0))
        throw ConfigError("XMap: knot soc " + std::to_string(k.soc) + " outside [0, 1]");
      if (!(k.temp_k > 0.0) || !std::isfinite(k.temp_k))
        throw ConfigError("XMap: knot temperature must be positive kelvin");
      if (!std::isfinite(k.x) || !(1.0 + k.x > 0.0))
        throw ConfigError("XMap: knot requires 1 + x > 0, got x = " + std::to_string(k.x));
      socs_.push_back(k.soc);
      temps_.push_back(k.temp_k);
    }
    std::sort(socs_.begin(), socs_.end());
    socs_.erase(std::unique(socs_.begin(), socs_.end()), socs_.end());
    std::sort(temps_.begin(), temps_.end());
    temps_.erase(std::unique(temps_.begin(), temps_.end()), temps_.end());

    grid_.assign(socs_.size() * temps_.size(), 0.0);
    for (std::size_t r = 0; r < socs_.size(); ++r) {
      std::vector<double> row_t;
      std::vector<double> row_x;
      for (const auto& k : knots_) {
        if (k.soc != socs_[r]) continue;
        row_t.push_back(k.temp_k);
        row_x.push_back(k.x);
      }
      std::vector<std::size_t> order(row_t.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return row_t[a] < row_t[b]; });
      std::vector<double> ts;
      std::vector<double> xs;
      for (auto i : order) {
        if (!ts.empty() && ts.back() == row_t[i])
          throw ConfigError("XMap: duplicate knot at soc " + std::to_string(socs_[r]) + ", temp " +
                            std::to_string(row_t[i]) + " K");
        ts.push_back(row_t[i]);
        xs.push_back(row_x[i]);
      }
      for (std::size_t c = 0; c < temps_.size(); ++c) {
        grid_[r * temps_.size() + c] = detail::interp_linear(ts, xs, temps_[c]);
      }
    }
  }

  /// X at (soc, temp_k); soc must lie in [0, 1] and temp_k be positive.
  [[nodiscard]] double lookup(double soc, double temp_k) const {
    if (!(soc >= 0.0 && soc <= 1.0)) throw DomainError("x_lookup: soc outside [0, 1]");
    if (!(temp_k > 0.0)) throw DomainError("x_lookup: temperature must be positive kelvin");
    return std::max(raw(soc, temp_k), kMinDenominator - 1.0);
  }

  /// Unclamped bilinear value; exposed for diagnostics.
  [[nodiscard]] double raw(double soc, double temp_k) const noexcept {
    const std::size_t nt = temps_.size();
    auto row_value = [&](std::size_t r) {
      return detail::interp_linear(temps_, std::span<const double>(grid_).subspan(r * nt, nt), temp_k);
    };
    if (socs_.size() == 1) return row_value(0);
    std::size_t i = detail::segment_index(socs_, soc);
    double u = (soc - socs_[i]) / (socs_[i + 1] - socs_[i]);
    return (1.0 - u) * row_value(i) + u * row_value(i + 1);
  }

  [[nodiscard]] std::span<const XKnot> knots() const noexcept { return knots_; }
  [[nodiscard]] std::span<const double> grid_socs() const noexcept { return socs_; }
  [[nodiscard]] std::span<const double> grid_temps() const noexcept { return temps_; }
  /// Completed grid, row-major (SOC rows, temperature columns).
  [[nodiscard]] std::span<const double> grid_values() const noexcept { return grid_; }

 private:
  std::vector<XKnot> knots_;
  std::vector<double> socs_;
  std::vector<double> temps_;
  std::vector<double> grid_;
};

inline double x_lookup(const XMap& map, double soc, double temp_k) { return map.lookup(soc, temp_k); }

}  // namespace capfade

#endif
