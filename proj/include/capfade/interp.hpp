#ifndef CAPFADE_INTERP_HPP
#define CAPFADE_INTERP_HPP

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>

namespace capfade::detail {

/// Index i of the segment [xs[i], xs[i+1]] used to evaluate x. Points left of
/// the table use the first segment, points right of it the last one, so the
/// same linear formula extrapolates. Requires xs.size() >= 2, strictly
/// increasing.
inline std::size_t segment_index(std::span<const double> xs, double x) noexcept {
  assert(xs.size() >= 2);
  if (x <= xs.front()) return 0;
  if (x >= xs.back()) return xs.size() - 2;
  // First knot strictly greater than x; x lies in the segment ending there.
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  auto i = static_cast<std::size_t>(it - xs.begin());
  // An exact hit on an interior knot evaluates as the right end of the
  // lower segment (weight 1), which returns the knot value unchanged.
  if (xs[i - 1] == x && i >= 2) return i - 2;
  return i - 1;
}

/// Piecewise-linear interpolation with linear extrapolation from the end
/// segments. A single-point table is constant.
inline double interp_linear(std::span<const double> xs, std::span<const double> ys, double x) noexcept {
  assert(xs.size() == ys.size() && !xs.empty());
  if (xs.size() == 1) return ys.front();
  std::size_t i = segment_index(xs, x);
  double u = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return (1.0 - u) * ys[i] + u * ys[i + 1];
}

}  // namespace capfade::detail

#endif
