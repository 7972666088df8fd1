#ifndef CAPFADE_TOOLS_COMMANDS_HPP
#define CAPFADE_TOOLS_COMMANDS_HPP

// Batch workflows behind the capfade command line. Each command reads a
// RunConfig, writes its outputs under RunConfig::out_dir, and returns a
// process exit code.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "capfade/capfade.hpp"
#include "capfade/io.hpp"

namespace capfade::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kValidation = 1, kFit = 2, kSimulation = 3 };

/// Resolved configuration for one invocation.
struct RunConfig {
  boost::property_tree::ptree tree;
  fs::path base_dir = ".";  // relative paths in the config resolve here
  fs::path out_dir = "out";
  std::uint64_t seed = 1;
  unsigned parallel = 1;
  std::ostream* log = &std::cerr;

  [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
    auto v = tree.get_optional<std::string>(key);
    if (v && io::trim(*v).empty()) return std::nullopt;
    if (v) return std::string(io::trim(*v));
    return std::nullopt;
  }

  [[nodiscard]] double number(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    auto d = io::to_double(*v);
    if (!d) throw ConfigError("config key '" + key + "' is not a number: '" + *v + "'");
    return *d;
  }

  [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
  }

  [[nodiscard]] fs::path path(const std::string& value) const {
    fs::path p = value;
    return p.is_relative() ? base_dir / p : p;
  }

  /// Comma-separated list of paths, resolved against base_dir.
  [[nodiscard]] std::vector<fs::path> paths(const std::string& key) const {
    std::vector<fs::path> out;
    if (auto v = get(key))
      for (const auto& item : io::split(*v))
        if (!item.empty()) out.push_back(path(item));
    return out;
  }

  /// Applies a `section.key=value` override.
  void set(const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like section.key=value: " + assignment);
    tree.put(std::string(io::trim(assignment.substr(0, eq))), std::string(io::trim(assignment.substr(eq + 1))));
  }
};

inline RunConfig load_run_config(const fs::path& config_path) {
  RunConfig cfg;
  if (!config_path.empty()) {
    if (!fs::exists(config_path)) throw ValidationError("config file not found: '" + config_path.string() + "'");
    cfg.tree = io::detail::read_ini(config_path);
    cfg.base_dir = config_path.parent_path().empty() ? fs::path(".") : config_path.parent_path();
  }
  return cfg;
}

/// Checks that every path-valued key names an existing file.
inline void validate_paths(const RunConfig& cfg) {
  for (const char* key : {"model.battery", "model.xmap", "model.ecm", "profile.path", "eol.trajectory"}) {
    if (auto v = cfg.get(key); v && !fs::exists(cfg.path(*v)))
      throw ValidationError(std::string(key) + ": file not found: '" + cfg.path(*v).string() + "'");
  }
  if (auto v = cfg.get("household.trace"); v && *v != "synthetic" && !fs::exists(cfg.path(*v)))
    throw ValidationError("household.trace: file not found: '" + cfg.path(*v).string() + "'");
}

// ---------------------------------------------------------------------------
// Model and scenario assembly

struct Model {
  BatteryParams battery;
  XMap xmap;
  EcmParams ecm;
};

inline Model load_model(const RunConfig& cfg) {
  auto battery = cfg.get("model.battery") ? io::load_battery_params(cfg.path(*cfg.get("model.battery")))
                                          : lfp26650::battery_params();
  auto xmap = cfg.get("model.xmap") ? io::load_xmap_csv(cfg.path(*cfg.get("model.xmap"))) : lfp26650::x_map();
  auto ecm = cfg.get("model.ecm") ? io::load_ecm_params(cfg.path(*cfg.get("model.ecm"))) : lfp26650::ecm_params();
  return {battery, std::move(xmap), std::move(ecm)};
}

inline HouseholdTrace load_trace(const RunConfig& cfg) {
  const std::string src = cfg.text("household.trace", "synthetic");
  if (src != "synthetic") return io::load_household_trace_csv(cfg.path(src));
  SyntheticTraceOptions opt;
  opt.days = static_cast<int>(cfg.number("household.days", 365));
  opt.step_s = cfg.number("household.step_s", opt.step_s);
  opt.pv_peak_w = cfg.number("household.pv_peak_w", opt.pv_peak_w);
  opt.base_load_w = cfg.number("household.base_load_w", opt.base_load_w);
  opt.morning_load_w = cfg.number("household.morning_load_w", opt.morning_load_w);
  opt.evening_load_w = cfg.number("household.evening_load_w", opt.evening_load_w);
  opt.home_temp_c = cfg.number("household.temp_c", opt.home_temp_c);
  opt.seed = cfg.seed;
  return synthetic_household_trace(opt);
}

inline PackConfig load_pack(const RunConfig& cfg) {
  PackConfig pack;
  pack.series = static_cast<int>(cfg.number("pack.series", pack.series));
  pack.parallel = static_cast<int>(cfg.number("pack.parallel", pack.parallel));
  pack.cell_nominal_voltage = cfg.number("pack.cell_voltage", pack.cell_nominal_voltage);
  pack.validate();
  return pack;
}

/// A profile ready to simulate, with the SOC and horizon it implies.
struct Scenario {
  std::string label;
  CurrentProfile profile;
  double initial_soc;
  double horizon_s;
};

inline Scenario build_scenario(const RunConfig& cfg, const Model& model, const std::string& kind) {
  const double temp_k = celsius_to_kelvin(cfg.number("profile.temp_c", 25.0));
  const double soc = cfg.number("profile.soc", cfg.number("run.initial_soc", 0.5));
  const double default_horizon = cfg.number("run.horizon_days", 365.0) * kSecondsPerDay;
  double horizon = cfg.number("run.horizon_s", default_horizon);
  const double capacity = model.ecm.capacity_ah;

  if (kind == "calendar") {
    return {kind, CurrentProfile::constant(0.0, temp_k, 1.0), soc, horizon};
  }
  if (kind == "cycle") {
    CycleConfig cycle;
    cycle.capacity_ah = capacity;
    cycle.soc_low = cfg.number("profile.soc_low", cycle.soc_low);
    cycle.soc_high = cfg.number("profile.soc_high", cycle.soc_high);
    cycle.charge_c = cfg.number("profile.charge_c", cycle.charge_c);
    cycle.discharge_c = cfg.number("profile.discharge_c", cycle.discharge_c);
    cycle.rest_s = cfg.number("profile.rest_s", cycle.rest_s);
    cycle.temp_k = temp_k;
    if (cfg.get("profile.throughput_ah")) cycle.throughput_ah = cfg.number("profile.throughput_ah", 0.0);
    return {kind, generate_cycle(cycle), cycle.soc_low, horizon};
  }
  if (kind == "hev") {
    return {kind, generate_hev_cycle(capacity, cfg.number("profile.throughput_ah", 0.48), temp_k), soc, horizon};
  }
  if (kind == "file") {
    auto p = cfg.get("profile.path");
    if (!p) throw ConfigError("profile.kind = file needs profile.path");
    return {kind, io::load_profile_csv(cfg.path(*p), temp_k), soc, horizon};
  }
  if (kind == "baseline" || kind == "aggressive") {
    auto trace = load_trace(cfg);
    auto pack = load_pack(cfg);
    const double floor = cfg.number("policy.soc_floor", 0.20);
    if (!cfg.get("run.horizon_s") && !cfg.get("run.horizon_days")) horizon = trace.duration_s;
    if (kind == "baseline") return {kind, baseline_policy(trace, model.ecm, pack, soc, floor), soc, horizon};
    AggressivePolicyOptions opt;
    opt.soc_floor = floor;
    opt.soc_high = cfg.number("policy.soc_high", opt.soc_high);
    opt.grid_charge_c = cfg.number("policy.grid_charge_c", opt.grid_charge_c);
    opt.peak_discharge_c = cfg.number("policy.peak_discharge_c", opt.peak_discharge_c);
    opt.peak_begin_h = cfg.number("policy.peak_begin_h", opt.peak_begin_h);
    opt.peak_end_h = cfg.number("policy.peak_end_h", opt.peak_end_h);
    return {kind, aggressive_policy(trace, model.ecm, pack, soc, opt), soc, horizon};
  }
  throw ConfigError("unknown profile kind '" + kind + "' (calendar, cycle, hev, file, baseline, aggressive)");
}

inline SimulationOptions simulation_options(const RunConfig& cfg, const Scenario& sc, bool record_soc) {
  SimulationOptions opt;
  opt.initial_soc = sc.initial_soc;
  opt.horizon_s = sc.horizon_s;
  opt.record_every_s = cfg.number("run.record_s", kSecondsPerDay);
  opt.max_step_s = cfg.number("run.step_s", 60.0);
  opt.record_soc = record_soc;
  return opt;
}

inline std::vector<std::string> scenario_kinds(const RunConfig& cfg, const std::string& key) {
  std::vector<std::string> kinds;
  if (auto v = cfg.get(key))
    for (auto& k : io::split(*v))
      if (!k.empty()) kinds.push_back(k);
  if (kinds.empty()) kinds.push_back(cfg.text("profile.kind", "calendar"));
  return kinds;
}

/// Runs fn over items, on up to `parallel` threads, keeping input order.
template <typename T, typename Fn>
auto run_all(const std::vector<T>& items, unsigned parallel, Fn fn) {
  using R = decltype(fn(items.front()));
  std::vector<R> out;
  if (parallel <= 1) {
    for (const auto& it : items) out.push_back(fn(it));
    return out;
  }
  for (std::size_t base = 0; base < items.size(); base += parallel) {
    std::vector<std::future<R>> batch;
    for (std::size_t i = base; i < std::min(items.size(), base + parallel); ++i)
      batch.push_back(std::async(std::launch::async, fn, std::cref(items[i])));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

inline void write_json(const fs::path& path, const json& doc) {
  auto out = io::detail::open_out(path);
  out << doc.dump(2) << "\n";
}

inline json fit_to_json(const FitResult& fit) {
  json params = json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) params[fit.names[i]] = fit.values[i];
  return {{"parameters", params},   {"sse", fit.sse},
          {"iterations", fit.iterations}, {"evaluations", fit.evaluations},
          {"converged", fit.converged},   {"underdetermined", fit.underdetermined},
          {"notes", fit.notes}};
}

// ---------------------------------------------------------------------------
// simulate

inline int cmd_simulate(const RunConfig& cfg) {
  validate_paths(cfg);
  const Model model = load_model(cfg);
  const Scenario sc = build_scenario(cfg, model, cfg.text("profile.kind", "calendar"));
  const auto opt = simulation_options(cfg, sc, false);
  const auto result = simulate(sc.profile, model.battery, model.xmap, model.ecm, opt);

  io::write_trajectory_csv(cfg.out_dir / "trajectory.csv", result.trajectory);
  const auto& f = result.final_fade;
  json summary = {
      {"profile", sc.label},
      {"horizon_s", opt.horizon_s},
      {"initial_soc", opt.initial_soc},
      {"final", {{"q_sei_pct", f.q_sei}, {"q_am_pct", f.q_am}, {"q_total_pct", f.q_total()}}},
      {"final_soc", result.final_ecm.soc},
      {"saturation",
       {{"steps", result.saturation.steps},
        {"saturated_steps", result.saturation.saturated_steps},
        {"saturated_seconds", result.saturation.saturated_seconds}}},
  };
  write_json(cfg.out_dir / "summary.json", summary);
  *cfg.log << "simulate: " << sc.label << " q_total = " << f.q_total() << " % after " << opt.horizon_s << " s\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// eol

inline int cmd_eol(const RunConfig& cfg) {
  validate_paths(cfg);
  EolOptions eol;
  eol.threshold = cfg.number("eol.threshold", eol.threshold);
  eol.min_window_s = cfg.number("eol.min_window_days", 365.0) * kSecondsPerDay;
  const std::string fit = cfg.text("eol.fit", "per_mechanism");
  if (fit == "total") eol.fit = EolFit::total;
  else if (fit != "per_mechanism") throw ConfigError("eol.fit must be per_mechanism or total, got '" + fit + "'");

  auto estimate_json = [&](const std::string& label, const EolEstimate& e) {
    return json{{"label", label},
                {"years_to_eol", e.years_to_eol},
                {"threshold", e.threshold},
                {"fit", {{"sqrt_year_coefficient", e.sqrt_coefficient}, {"linear_year_coefficient", e.linear_coefficient}}}};
  };

  json report = {{"threshold", eol.threshold}, {"fit", fit}, {"estimates", json::array()}};
  if (auto traj_path = cfg.get("eol.trajectory")) {
    auto traj = io::load_trajectory_csv(cfg.path(*traj_path));
    auto est = extrapolate_eol(traj, eol);
    report["estimates"].push_back(estimate_json(traj.label, est));
    write_json(cfg.out_dir / "eol.json", report);
    *cfg.log << "eol: " << est.years_to_eol << " years\n";
    return kOk;
  }

  const Model model = load_model(cfg);
  const auto kinds = scenario_kinds(cfg, "eol.policies");
  std::vector<Scenario> scenarios;
  for (const auto& k : kinds) scenarios.push_back(build_scenario(cfg, model, k));
  auto results = run_all(scenarios, cfg.parallel, [&](const Scenario& sc) {
    return simulate(sc.profile, model.battery, model.xmap, model.ecm, simulation_options(cfg, sc, false));
  });
  std::vector<EolEstimate> estimates;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    io::write_trajectory_csv(cfg.out_dir / ("trajectory_" + scenarios[i].label + ".csv"), results[i].trajectory);
    estimates.push_back(extrapolate_eol(results[i].trajectory, eol));
    report["estimates"].push_back(estimate_json(scenarios[i].label, estimates.back()));
    *cfg.log << "eol: " << scenarios[i].label << " " << estimates.back().years_to_eol << " years\n";
  }
  if (estimates.size() > 1) {
    std::vector<std::size_t> order(estimates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return estimates[a].years_to_eol < estimates[b].years_to_eol; });
    json ranking = json::array();
    for (auto i : order) ranking.push_back(scenarios[i].label);
    report["earliest_first"] = ranking;
  }
  write_json(cfg.out_dir / "eol.json", report);
  return kOk;
}

// ---------------------------------------------------------------------------
// analyze

inline std::vector<double> bin_edges(const RunConfig& cfg, const std::string& key, double lo, double hi, double count) {
  if (auto v = cfg.get(key)) {
    auto parts = io::split(*v);
    if (parts.size() != 3) throw ConfigError(key + " must be 'low, high, count'");
    auto a = io::to_double(parts[0]);
    auto b = io::to_double(parts[1]);
    auto c = io::to_double(parts[2]);
    if (!a || !b || !c || *c < 1) throw ConfigError(key + " must be 'low, high, count'");
    lo = *a;
    hi = *b;
    count = *c;
  }
  return uniform_edges(lo, hi, static_cast<std::size_t>(count));
}

inline int cmd_analyze(const RunConfig& cfg) {
  validate_paths(cfg);
  const Model model = load_model(cfg);
  const auto c_edges = bin_edges(cfg, "analyze.c_rate_bins", -2.0, 2.0, 16);
  const auto soc_edges = bin_edges(cfg, "analyze.soc_bins", 0.0, 1.0, 20);
  const double high_c = cfg.number("analyze.high_c_rate", 0.5);
  const double high_soc = cfg.number("analyze.high_soc", 0.8);
  const auto kinds = scenario_kinds(cfg, "analyze.policies");
  std::vector<Scenario> scenarios;
  for (const auto& k : kinds) scenarios.push_back(build_scenario(cfg, model, k));

  auto hists = run_all(scenarios, cfg.parallel, [&](const Scenario& sc) {
    auto r = simulate(sc.profile, model.battery, model.xmap, model.ecm, simulation_options(cfg, sc, true));
    return usage_histograms(sc.profile, r.soc_series, model.ecm.capacity_ah, sc.horizon_s, c_edges, soc_edges);
  });

  json report = json::array();
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& h = hists[i];
    const auto& label = scenarios[i].label;
    io::write_histogram_csv(cfg.out_dir / ("c_rate_hist_" + label + ".csv"), h.c_rate);
    io::write_histogram_csv(cfg.out_dir / ("soc_hist_" + label + ".csv"), h.soc);
    // |C| above the threshold, both directions.
    double above_c = 0.0;
    for (std::size_t b = 0; b < h.c_rate.seconds.size(); ++b)
      if (h.c_rate.edges[b] >= high_c || h.c_rate.edges[b + 1] <= -high_c) above_c += h.c_rate.seconds[b];
    report.push_back({{"label", label},
                      {"horizon_s", scenarios[i].horizon_s},
                      {"c_rate_seconds_total", h.c_rate.total()},
                      {"soc_seconds_total", h.soc.total()},
                      {"seconds_above_c_rate", above_c},
                      {"seconds_above_soc", h.soc.mass_at_or_above(high_soc)},
                      {"c_rate_seconds", h.c_rate.seconds},
                      {"soc_seconds", h.soc.seconds}});
  }
  write_json(cfg.out_dir / "histograms.json", json{{"c_rate_edges", c_edges},
                                                   {"soc_edges", soc_edges},
                                                   {"high_c_rate", high_c},
                                                   {"high_soc", high_soc},
                                                   {"runs", report}});
  return kOk;
}

// ---------------------------------------------------------------------------
// calibrate

inline int cmd_calibrate(const RunConfig& cfg) {
  validate_paths(cfg);
  auto reference_paths = cfg.paths("calibrate.reference");
  auto calendar_paths = cfg.paths("calibrate.calendar");
  auto cycling_paths = cfg.paths("calibrate.cycling");
  if (reference_paths.empty()) reference_paths = calendar_paths;
  if (reference_paths.empty()) throw ValidationError("calibrate: no calendar datasets configured (calibrate.reference)");
  if (calendar_paths.empty()) calendar_paths = reference_paths;

  // Load and validate every input before any output is written.
  auto load_all = [](const std::vector<fs::path>& paths) {
    std::vector<CalibrationDataset> out;
    for (const auto& p : paths) out.push_back(io::load_dataset_csv(p));
    return out;
  };
  const auto reference = load_all(reference_paths);
  const auto calendar = load_all(calendar_paths);
  const auto cycling_sets = load_all(cycling_paths);
  std::vector<CyclingCase> cycling;
  for (const auto& d : cycling_sets) {
    if (d.kind != DatasetKind::cycling) throw ValidationError(d.name + ": listed under calibrate.cycling but kind is calendar");
    cycling.push_back({d, io::load_profile_csv(d.profile_path, d.temp_k), cfg.number("calibrate.initial_soc", 0.5)});
  }
  const Model base = load_model(cfg);

  json report = json::object();

  MinimizeOptions minimize_opt;
  minimize_opt.max_iterations = static_cast<int>(cfg.number("calibrate.max_iterations", minimize_opt.max_iterations));
  minimize_opt.restarts = static_cast<int>(cfg.number("calibrate.restarts", minimize_opt.restarts));

  SeiGuess sei_guess;
  sei_guess.k_sei = cfg.number("calibrate.k_sei_guess", sei_guess.k_sei);
  sei_guess.e_sei = cfg.number("calibrate.e_sei_guess", sei_guess.e_sei);
  sei_guess.x_ref = cfg.number("calibrate.x_ref_guess", sei_guess.x_ref);
  SeiFitOptions sei_opt;
  sei_opt.minimize = minimize_opt;
  if (cfg.get("calibrate.anchor_x_ref")) sei_opt.anchor_x_ref = cfg.number("calibrate.anchor_x_ref", 0.0);
  const FitResult step1 = fit_sei_reference(reference, sei_guess, {}, sei_opt);
  json s1 = fit_to_json(step1);
  s1["datasets"] = json::array();
  for (const auto& d : reference) s1["datasets"].push_back(d.name);
  s1["k_sei_over_1_plus_x"] = sei_effective_prefactor(step1);
  json residuals = json::array();
  for (const auto& d : reference) {
    for (const auto& p : d.points)
      residuals.push_back({{"dataset", d.name}, {"time_s", p.time_s},
                           {"residual_pct", calendar_loss(step1.value("k_sei"), step1.value("e_sei"), step1.value("x_ref"),
                                                          d.temp_k, p.time_s) - p.loss_pct}});
  }
  s1["residuals"] = residuals;
  report["step1_sei_reference"] = s1;

  XFitOptions x_opt;
  x_opt.parallel = cfg.parallel;
  x_opt.minimize = minimize_opt;
  const auto step2 = fit_x_points(calendar, step1.value("k_sei"), step1.value("e_sei"), x_opt);
  json s2 = {{"knots", json::array()}, {"failures", step2.failures}};
  for (std::size_t i = 0; i < step2.fits.size(); ++i) {
    json f = fit_to_json(step2.fits[i]);
    f["dataset"] = calendar[i].name;
    f["soc_frac"] = calendar[i].soc;
    f["temp_c"] = kelvin_to_celsius(calendar[i].temp_k);
    s2["knots"].push_back(f);
  }
  report["step2_x_map"] = s2;
  if (!step2.map) {
    write_json(cfg.out_dir / "calibration_report.json", report);
    *cfg.log << "calibrate: every X fit failed\n";
    return kFit;
  }

  BatteryParams fitted = base.battery;
  fitted.nominal_capacity_ah = cfg.number("calibrate.nominal_capacity_ah", base.battery.nominal_capacity_ah);
  fitted.k_sei = step1.value("k_sei");
  fitted.e_sei = step1.value("e_sei");
  bool converged = step1.converged && step2.failures.empty();

  if (cycling.empty()) {
    report["step3_lam"] = {{"skipped", true}, {"reason", "no cycling datasets configured"}};
    *cfg.log << "calibrate: no cycling datasets, step 3 skipped; k_am/e_am carried from the base parameters\n";
  } else {
    AmGuess am_guess;
    am_guess.k_am = cfg.number("calibrate.k_am_guess", am_guess.k_am);
    am_guess.e_am = cfg.number("calibrate.e_am_guess", am_guess.e_am);
    AmFitOptions am_opt;
    am_opt.minimize = minimize_opt;
    am_opt.max_step_s = cfg.number("run.step_s", am_opt.max_step_s);
    const FitResult step3 = fit_am(cycling, fitted, *step2.map, base.ecm, am_guess, {}, am_opt);
    json s3 = fit_to_json(step3);
    s3["datasets"] = json::array();
    for (const auto& c : cycling) s3["datasets"].push_back(c.dataset.name);
    report["step3_lam"] = s3;
    fitted.k_am = step3.value("k_am");
    fitted.e_am = step3.value("e_am");
    converged = converged && step3.converged;
  }

  io::write_battery_params(cfg.out_dir / "battery_params.ini", fitted);
  io::write_xmap_csv(cfg.out_dir / "xmap.csv", step2.knots);
  report["converged"] = converged;
  write_json(cfg.out_dir / "calibration_report.json", report);
  *cfg.log << "calibrate: k_sei = " << fitted.k_sei << ", e_sei = " << fitted.e_sei << ", k_am = " << fitted.k_am
           << ", e_am = " << fitted.e_am << (converged ? "" : " (not converged)") << "\n";
  return converged ? kOk : kFit;
}

/// Runs a command, mapping exceptions onto the exit-code contract.
inline int run_guarded(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const FitError& e) {
    err << "fit error: " << e.what() << "\n";
    return kFit;
  } catch (const ModelValidityError& e) {
    err << "model error: " << e.what() << "\n";
    return kSimulation;
  } catch (const NoEolError& e) {
    err << "no end of life: " << e.what() << "\n";
    return kSimulation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSimulation;
  }
}

}  // namespace capfade::cli

#endif
