#ifndef CAPFADE_MINIMIZE_HPP
#define CAPFADE_MINIMIZE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "capfade/error.hpp"

namespace capfade {

struct Interval {
  double lo;
  double hi;

  [[nodiscard]] bool contains(double v) const noexcept { return v >= lo && v <= hi; }
  [[nodiscard]] double clamp(double v) const noexcept { return std::clamp(v, lo, hi); }
};

struct MinimizeOptions {
  double step_tolerance = 1e-8;
  double objective_tolerance = 1e-12;
  int max_iterations = 2000;
  /// Fresh simplex restarts around the converged point; guards against
  /// premature collapse of the simplex.
  int restarts = 1;
  /// Initial simplex edge as a fraction of each bound interval.
  double initial_step_fraction = 0.1;
};

/// Outcome of a parameter estimation. `sse` holds the objective value at the
/// returned point.
struct FitResult {
  std::vector<std::string> names;
  std::vector<double> values;
  double sse = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  /// The data cannot pin down all returned parameters independently.
  bool underdetermined = false;
  std::vector<std::string> notes;

  [[nodiscard]] double value(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return values[i];
    throw std::out_of_range("FitResult: no parameter named " + name);
  }

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

/// Bounded Nelder-Mead simplex search.
///
/// Trial points are projected onto the bound box. Coordinates whose interval
/// has lo == hi are held fixed. Stops when the simplex diameter (max-norm
/// distance from the best vertex) drops below step_tolerance, when the
/// objective spread over the simplex drops below objective_tolerance, or at
/// the iteration cap (converged = false; best point still returned). A +inf
/// objective marks an infeasible trial point; NaN, or a non-finite objective
/// at the initial point, raises FitError.
template <typename Objective>
FitResult minimize(Objective&& objective, std::vector<double> initial, std::span<const Interval> bounds,
                   const MinimizeOptions& options = {}) {
  const std::size_t n_all = initial.size();
  if (bounds.size() != n_all) throw DomainError("minimize: bounds size does not match parameter count");
  for (std::size_t i = 0; i < n_all; ++i) {
    if (!(bounds[i].lo <= bounds[i].hi)) throw DomainError("minimize: empty bound interval");
    if (!bounds[i].contains(initial[i])) throw DomainError("minimize: initial point outside bounds");
  }

  FitResult result;
  result.names.resize(n_all);
  for (std::size_t i = 0; i < n_all; ++i) result.names[i] = "p" + std::to_string(i);

  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n_all; ++i)
    if (bounds[i].lo < bounds[i].hi) free.push_back(i);
  const std::size_t n = free.size();

  std::vector<double> full = initial;
  auto evaluate = [&](const std::vector<double>& reduced) {
    for (std::size_t k = 0; k < n; ++k) full[free[k]] = reduced[k];
    double f = objective(std::span<const double>(full));
    ++result.evaluations;
    if (std::isnan(f)) throw FitError("minimize: objective returned NaN");
    if (f < 0.0 && std::isinf(f)) throw FitError("minimize: objective returned -inf");
    return f;
  };
  auto project = [&](std::vector<double>& p) {
    for (std::size_t k = 0; k < n; ++k) p[k] = bounds[free[k]].clamp(p[k]);
  };

  std::vector<double> best(n);
  for (std::size_t k = 0; k < n; ++k) best[k] = initial[free[k]];
  double best_f = evaluate(best);
  if (!std::isfinite(best_f)) throw FitError("minimize: objective not finite at the initial point");

  if (n == 0) {
    result.values = initial;
    result.sse = best_f;
    result.converged = true;
    return result;
  }

  bool converged = false;
  int iterations = 0;
  for (int round = 0; round <= options.restarts; ++round) {
    // Initial simplex around the current best, stepping away from the nearer
    // bound so no vertex collapses onto its neighbour.
    std::vector<std::vector<double>> simplex(n + 1, best);
    std::vector<double> values(n + 1, best_f);
    for (std::size_t k = 0; k < n; ++k) {
      const auto& b = bounds[free[k]];
      double h = options.initial_step_fraction * (b.hi - b.lo);
      if (round > 0) h *= 0.1;
      double up = best[k] + h;
      simplex[k + 1][k] = up <= b.hi ? up : best[k] - h;
      project(simplex[k + 1]);
      values[k + 1] = evaluate(simplex[k + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    converged = false;
    for (; iterations < options.max_iterations; ++iterations) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
      const auto& lo_vertex = simplex[order.front()];
      double diameter = 0.0;
      for (std::size_t v = 0; v <= n; ++v)
        for (std::size_t k = 0; k < n; ++k) diameter = std::max(diameter, std::abs(simplex[v][k] - lo_vertex[k]));
      double spread = values[order.back()] - values[order.front()];
      if (diameter < options.step_tolerance || (std::isfinite(spread) && spread < options.objective_tolerance)) {
        converged = true;
        break;
      }

      const std::size_t worst = order.back();
      const std::size_t second = order[n - 1];
      const std::size_t bestv = order.front();
      std::vector<double> centroid(n, 0.0);
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == worst) continue;
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[v][k];
      }
      for (auto& c : centroid) c /= static_cast<double>(n);

      auto along = [&](double t) {
        std::vector<double> p(n);
        for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
        project(p);
        return p;
      };

      auto reflected = along(-1.0);
      double fr = evaluate(reflected);
      if (fr < values[bestv]) {
        auto expanded = along(-2.0);
        double fe = evaluate(expanded);
        if (fe < fr) {
          simplex[worst] = std::move(expanded);
          values[worst] = fe;
        } else {
          simplex[worst] = std::move(reflected);
          values[worst] = fr;
        }
        continue;
      }
      if (fr < values[second]) {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
        continue;
      }
      auto contracted = fr < values[worst] ? along(-0.5) : along(0.5);
      double fc = evaluate(contracted);
      if (fc < std::min(fr, values[worst])) {
        simplex[worst] = std::move(contracted);
        values[worst] = fc;
        continue;
      }
      // Shrink toward the best vertex.
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == bestv) continue;
        for (std::size_t k = 0; k < n; ++k) simplex[v][k] = simplex[bestv][k] + 0.5 * (simplex[v][k] - simplex[bestv][k]);
        values[v] = evaluate(simplex[v]);
      }
    }

    std::size_t arg = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    if (values[arg] <= best_f) {
      best = simplex[arg];
      best_f = values[arg];
    }
    if (!converged) break;
  }

  for (std::size_t k = 0; k < n; ++k) full[free[k]] = best[k];
  result.values = full;
  result.sse = best_f;
  result.iterations = iterations;
  result.converged = converged;
  return result;
}

}  // namespace capfade

#endif
