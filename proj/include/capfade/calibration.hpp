#ifndef CAPFADE_CALIBRATION_HPP
#define CAPFADE_CALIBRATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capfade/aging.hpp"
#include "capfade/ecm.hpp"
#include "capfade/error.hpp"
#include "capfade/minimize.hpp"
#include "capfade/profile.hpp"
#include "capfade/simulator.hpp"
#include "capfade/xmap.hpp"

namespace capfade {

enum class DatasetKind { calendar, cycling };

struct LossPoint {
  double time_s;
  double loss_pct;
};

/// Measured capacity loss under one operating condition. Calendar sets carry
/// the storage (soc, temp); cycling sets are driven by a current profile.
struct CalibrationDataset {
  DatasetKind kind = DatasetKind::calendar;
  double soc = 0.5;
  double temp_k = 298.15;
  std::string profile_path;
  std::vector<LossPoint> points;
  std::string name;

  void validate() const {
    const std::string who = "dataset" + (name.empty() ? std::string() : " '" + name + "'");
    if (points.size() < 2) throw ValidationError(who + ": at least two points are required");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      if (!(p.time_s >= 0.0) || !std::isfinite(p.time_s)) throw ValidationError(who + ": invalid time at row " + std::to_string(i + 1));
      if (!(p.loss_pct >= 0.0) || !std::isfinite(p.loss_pct))
        throw ValidationError(who + ": loss must be non-negative at row " + std::to_string(i + 1));
      if (i > 0 && !(p.time_s > points[i - 1].time_s))
        throw ValidationError(who + ": times not strictly increasing at row " + std::to_string(i + 1));
    }
    if (kind == DatasetKind::calendar) {
      if (!(soc >= 0.0 && soc <= 1.0)) throw ValidationError(who + ": soc outside [0, 1]");
      if (!(temp_k > 0.0)) throw ValidationError(who + ": temperature must be positive kelvin");
    }
  }
};

/// Sum over points of (predict(time) - measured)^2.
template <typename Predict>
double residual_sse(Predict&& predict, const CalibrationDataset& dataset) {
  dataset.validate();
  double sse = 0.0;
  for (const auto& p : dataset.points) {
    double r = predict(p.time_s) - p.loss_pct;
    sse += r * r;
  }
  return sse;
}

/// Closed-form calendar loss from a fresh cell: arrhenius / (1 + x) sqrt(t).
inline double calendar_loss(double k_sei, double e_sei, double x, double temp_k, double time_s) {
  return arrhenius(k_sei, e_sei, temp_k) / (1.0 + x) * std::sqrt(time_s);
}

// ---------------------------------------------------------------------------
// Step 1: SEI reference fit

struct SeiGuess {
  double k_sei = 5000.0;
  double e_sei = 38000.0;
  double x_ref = 0.5;
};

struct SeiBounds {
  Interval k_sei{1.0, 1e6};
  Interval e_sei{1e4, 1e5};
  Interval x_ref{-0.9, 10.0};
};

struct SeiFitOptions {
  MinimizeOptions minimize;
  /// Hold x_ref at this value and fit only (k_sei, e_sei).
  std::optional<double> anchor_x_ref;
};

/// Fits (k_sei, e_sei, x_ref) of the closed-form SEI loss to calendar data
/// sharing one X. Optimizes ln(k_sei) and e_sei / 1e4 internally.
///
/// Calendar data constrain k_sei and x_ref only through k_sei / (1 + x_ref),
/// so with x_ref free the split between them is set by the starting point;
/// `sei_effective_prefactor` is the identified quantity. A single
/// temperature also leaves k_sei and e_sei collinear. Both cases set
/// `underdetermined`.
inline FitResult fit_sei_reference(std::span<const CalibrationDataset> datasets, const SeiGuess& guess = {},
                                   const SeiBounds& bounds = {}, const SeiFitOptions& options = {}) {
  if (datasets.empty()) throw ValidationError("fit_sei_reference: no calendar datasets");
  std::set<double> temps;
  std::size_t n_points = 0;
  std::set<double> losses;
  for (const auto& d : datasets) {
    if (d.kind != DatasetKind::calendar) throw ValidationError("fit_sei_reference: dataset is not calendar kind");
    d.validate();
    temps.insert(d.temp_k);
    n_points += d.points.size();
    for (const auto& p : d.points) losses.insert(p.loss_pct);
  }
  if (losses.size() < 2) throw FitError("fit_sei_reference: degenerate dataset, all losses are equal");

  const double scale_e = 1e4;
  std::vector<Interval> box = {
      {std::log(bounds.k_sei.lo), std::log(bounds.k_sei.hi)},
      {bounds.e_sei.lo / scale_e, bounds.e_sei.hi / scale_e},
      bounds.x_ref,
  };
  std::vector<double> start = {std::log(bounds.k_sei.clamp(guess.k_sei)), bounds.e_sei.clamp(guess.e_sei) / scale_e,
                               bounds.x_ref.clamp(guess.x_ref)};
  if (options.anchor_x_ref) {
    if (!bounds.x_ref.contains(*options.anchor_x_ref)) throw DomainError("fit_sei_reference: anchor outside x bounds");
    box[2] = {*options.anchor_x_ref, *options.anchor_x_ref};
    start[2] = *options.anchor_x_ref;
  }

  auto objective = [&](std::span<const double> z) {
    const double k = std::exp(z[0]);
    const double e = z[1] * scale_e;
    const double x = z[2];
    double sse = 0.0;
    for (const auto& d : datasets) {
      const double rate = arrhenius(k, e, d.temp_k) / (1.0 + x);
      for (const auto& p : d.points) {
        double r = rate * std::sqrt(p.time_s) - p.loss_pct;
        sse += r * r;
      }
    }
    return sse;
  };

  FitResult fit = minimize(objective, start, box, options.minimize);
  fit.names = {"k_sei", "e_sei", "x_ref"};
  fit.values = {std::exp(fit.values[0]), fit.values[1] * scale_e, fit.values[2]};
  if (!options.anchor_x_ref) {
    fit.notes.push_back("k_sei and x_ref enter only as k_sei/(1+x_ref); their split follows the initial guess");
  }
  if (temps.size() < 2) {
    fit.underdetermined = true;
    fit.notes.push_back("single temperature: k_sei and e_sei are collinear");
  }
  const std::size_t n_free = options.anchor_x_ref ? 2 : 3;
  if (n_points < n_free) {
    fit.underdetermined = true;
    fit.notes.push_back("fewer points than free parameters");
  }
  return fit;
}

inline FitResult fit_sei_reference(const CalibrationDataset& dataset, const SeiGuess& guess = {},
                                   const SeiBounds& bounds = {}, const SeiFitOptions& options = {}) {
  return fit_sei_reference(std::span<const CalibrationDataset>(&dataset, 1), guess, bounds, options);
}

/// k_sei / (1 + x_ref) of a step-1 fit.
inline double sei_effective_prefactor(const FitResult& sei_fit) {
  return sei_fit.value("k_sei") / (1.0 + sei_fit.value("x_ref"));
}

// ---------------------------------------------------------------------------
// Step 2: X at additional storage conditions

struct XFitOptions {
  Interval x_bounds{-0.9, 10.0};
  MinimizeOptions minimize;
  /// Worker threads for the independent per-dataset fits.
  unsigned parallel = 1;
};

struct XFitOutcome {
  /// Map over the successful fits; empty when every fit failed.
  std::optional<XMap> map;
  std::vector<XKnot> knots;
  std::vector<FitResult> fits;  // one per input dataset, in input order
  std::vector<std::string> failures;
};

/// Fits X for one calendar dataset with k_sei and e_sei frozen.
inline FitResult fit_x_point(const CalibrationDataset& d, double k_sei, double e_sei, const XFitOptions& options = {}) {
  if (d.kind != DatasetKind::calendar) throw ValidationError("fit_x_points: dataset is not calendar kind");
  d.validate();
  const double rate = arrhenius(k_sei, e_sei, d.temp_k);
  // Linear least squares in y = 1 / (1 + x) seeds the 1-D search.
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : d.points) {
    double c = rate * std::sqrt(p.time_s);
    num += c * p.loss_pct;
    den += c * c;
  }
  double x0 = options.x_bounds.hi;
  if (den > 0.0 && num > 0.0) x0 = options.x_bounds.clamp(den / num - 1.0);

  auto objective = [&](std::span<const double> z) {
    double sse = 0.0;
    for (const auto& p : d.points) {
      double r = rate / (1.0 + z[0]) * std::sqrt(p.time_s) - p.loss_pct;
      sse += r * r;
    }
    return sse;
  };
  std::vector<Interval> box = {options.x_bounds};
  FitResult fit = minimize(objective, {x0}, box, options.minimize);
  fit.names = {"x"};
  return fit;
}

inline XFitOutcome fit_x_points(std::span<const CalibrationDataset> datasets, double k_sei, double e_sei,
                                const XFitOptions& options = {}) {
  std::set<std::pair<double, double>> conditions;
  for (const auto& d : datasets) {
    if (!conditions.insert({d.soc, d.temp_k}).second)
      throw ValidationError("fit_x_points: two datasets share soc " + std::to_string(d.soc) + ", temp " +
                            std::to_string(d.temp_k) + " K");
  }

  XFitOutcome out;
  out.fits.resize(datasets.size());
  std::vector<std::string> errors(datasets.size());
  auto run_one = [&](std::size_t i) {
    try {
      out.fits[i] = fit_x_point(datasets[i], k_sei, e_sei, options);
      if (!out.fits[i].converged) errors[i] = "did not converge";
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  const unsigned workers = std::max(1u, options.parallel);
  if (workers == 1) {
    for (std::size_t i = 0; i < datasets.size(); ++i) run_one(i);
  } else {
    for (std::size_t base = 0; base < datasets.size(); base += workers) {
      std::vector<std::future<void>> batch;
      for (std::size_t i = base; i < std::min(datasets.size(), base + workers); ++i)
        batch.push_back(std::async(std::launch::async, run_one, i));
      for (auto& f : batch) f.get();
    }
  }

  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const std::string label = datasets[i].name.empty() ? "dataset " + std::to_string(i + 1) : datasets[i].name;
    if (!errors[i].empty()) {
      out.failures.push_back(label + ": " + errors[i]);
      if (out.fits[i].values.empty()) continue;
    }
    out.knots.push_back({datasets[i].soc, datasets[i].temp_k, out.fits[i].values[0]});
  }
  if (!out.knots.empty()) out.map.emplace(out.knots);
  return out;
}

// ---------------------------------------------------------------------------
// Step 3: LAM fit on cycling data

/// A cycling dataset together with the profile that produced it.
struct CyclingCase {
  CalibrationDataset dataset;
  CurrentProfile profile;
  double initial_soc = 0.5;
};

struct AmGuess {
  double k_am = 1.0;
  double e_am = 35000.0;
};

struct AmBounds {
  Interval k_am{1e-4, 1e3};
  Interval e_am{1e4, 1e5};
};

struct AmFitOptions {
  MinimizeOptions minimize;
  double max_step_s = 60.0;
};

namespace detail {

// Q_total at each dataset time from a coupled run; sei_only receives the SEI
// part. Returns false when the simulation throws.
inline bool simulate_losses(const CyclingCase& c, const BatteryParams& params, const XMap& map,
                            const EcmParams& ecm, double max_step, std::vector<double>& total,
                            std::vector<double>* sei_only) {
  try {
    CoupledSimulator sim(c.profile, params, map, ecm, c.initial_soc, max_step);
    total.clear();
    if (sei_only) sei_only->clear();
    for (const auto& p : c.dataset.points) {
      sim.advance_to(p.time_s);
      total.push_back(sim.fade().q_total());
      if (sei_only) sei_only->push_back(sim.fade().q_sei);
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace detail

/// Fits (k_am, e_am) by scoring the coupled ECM + aging simulation's Q_total
/// against cycling measurements, with the SEI parameters and X map frozen.
/// Cases at several temperatures are needed to separate k_am from e_am.
///
/// The objective is normalized by the squared fade in excess of the SEI-only
/// prediction, since LAM loss can be orders of magnitude below SEI loss;
/// `sse` reports the unnormalized sum.
inline FitResult fit_am(std::span<const CyclingCase> cases, const BatteryParams& frozen, const XMap& map,
                        const EcmParams& ecm, const AmGuess& guess = {}, const AmBounds& bounds = {},
                        const AmFitOptions& options = {}) {
  if (cases.empty()) throw ValidationError("fit_am: no cycling datasets");
  frozen.validate();
  ecm.validate();
  std::set<double> temps;
  for (const auto& c : cases) {
    if (c.dataset.kind != DatasetKind::cycling) throw ValidationError("fit_am: dataset is not cycling kind");
    c.dataset.validate();
    for (const auto& s : c.profile.samples()) temps.insert(s.temp_k);
  }

  const double scale_e = 1e4;
  auto params_for = [&](double k_am, double e_am) {
    BatteryParams p = frozen;
    p.k_am = k_am;
    p.e_am = e_am;
    return p;
  };

  const double k0 = bounds.k_am.clamp(guess.k_am);
  const double e0 = bounds.e_am.clamp(guess.e_am);
  double excess = 0.0;
  double am_initial = 0.0;
  {
    const BatteryParams p0 = params_for(k0, e0);
    std::vector<double> total;
    std::vector<double> sei;
    for (const auto& c : cases) {
      if (!detail::simulate_losses(c, p0, map, ecm, options.max_step_s, total, &sei))
        throw FitError("fit_am: simulation failed at the initial guess");
      for (std::size_t i = 0; i < total.size(); ++i) {
        double e = c.dataset.points[i].loss_pct - sei[i];
        double a = total[i] - sei[i];
        excess += e * e;
        am_initial += a * a;
      }
    }
  }
  double norm = std::max(excess, am_initial);
  if (!(norm > 0.0)) norm = 1.0;

  std::size_t failed_candidates = 0;
  std::vector<double> total;
  auto raw_sse = [&](double k_am, double e_am) {
    const BatteryParams p = params_for(k_am, e_am);
    double sse = 0.0;
    for (const auto& c : cases) {
      if (!detail::simulate_losses(c, p, map, ecm, options.max_step_s, total, nullptr)) {
        ++failed_candidates;
        return std::numeric_limits<double>::infinity();
      }
      for (std::size_t i = 0; i < total.size(); ++i) {
        double r = total[i] - c.dataset.points[i].loss_pct;
        sse += r * r;
      }
    }
    return sse;
  };

  auto objective = [&](std::span<const double> z) { return raw_sse(std::exp(z[0]), z[1] * scale_e) / norm; };
  std::vector<Interval> box = {{std::log(bounds.k_am.lo), std::log(bounds.k_am.hi)},
                               {bounds.e_am.lo / scale_e, bounds.e_am.hi / scale_e}};
  FitResult fit = minimize(objective, {std::log(k0), e0 / scale_e}, box, options.minimize);
  fit.names = {"k_am", "e_am"};
  fit.values = {std::exp(fit.values[0]), fit.values[1] * scale_e};
  fit.sse = raw_sse(fit.values[0], fit.values[1]);
  if (failed_candidates > 0)
    fit.notes.push_back(std::to_string(failed_candidates) + " candidate simulations failed and were scored +inf");
  if (temps.size() < 2 && bounds.e_am.lo < bounds.e_am.hi) {
    fit.underdetermined = true;
    fit.notes.push_back("single temperature: k_am and e_am are collinear");
  }
  return fit;
}

inline FitResult fit_am(const CyclingCase& single, const BatteryParams& frozen, const XMap& map, const EcmParams& ecm,
                        const AmGuess& guess = {}, const AmBounds& bounds = {}, const AmFitOptions& options = {}) {
  return fit_am(std::span<const CyclingCase>(&single, 1), frozen, map, ecm, guess, bounds, options);
}

}  // namespace capfade

#endif
