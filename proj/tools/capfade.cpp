// capfade: calibrate, simulate, extrapolate and analyze capacity fade.

#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace capfade::cli;

  CLI::App app{"Capacity-fade calibration and simulation for LFP cells"};
  app.require_subcommand(1);
  app.footer(R"(Config keys (INI sections), defaults in brackets; paths are relative to the config file:
  [model]     battery, xmap, ecm                 [built-in LFP26650 set]
  [profile]   kind = calendar|cycle|hev|file|baseline|aggressive [calendar]
              temp_c [25], soc [0.5], path, throughput_ah [hev 0.48],
              soc_low [0.2], soc_high [0.95], charge_c [0.5], discharge_c [0.5], rest_s [0]
  [run]       horizon_days [365] or horizon_s, step_s [60], record_s [86400]
  [household] trace = synthetic|<csv> [synthetic], days [365], step_s [900],
              pv_peak_w [5000], base_load_w [350], morning_load_w [1200],
              evening_load_w [2200], temp_c [22]; the trace seed is --seed
  [pack]      series [16], parallel [115], cell_voltage [3.3]
  [policy]    soc_floor [0.2], soc_high [0.95], grid_charge_c [0.5],
              peak_discharge_c [1], peak_begin_h [17], peak_end_h [21]
  [eol]       trajectory (csv) or policies [profile.kind], threshold [0.8],
              min_window_days [365], fit = per_mechanism|total [per_mechanism]
  [analyze]   policies [profile.kind], c_rate_bins [-2, 2, 16], soc_bins [0, 1, 20],
              high_c_rate [0.5], high_soc [0.8]
  [calibrate] reference, calendar, cycling (comma-separated csv lists),
              anchor_x_ref, k_sei_guess [5000], e_sei_guess [38000], x_ref_guess [0.5],
              k_am_guess [1], e_am_guess [35000], initial_soc [0.5],
              max_iterations [2000], restarts [1], nominal_capacity_ah [from battery]
Exit codes: 0 ok, 1 invalid input, 2 fit did not converge, 3 simulation or model error.)");

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  unsigned parallel = 1;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "INI run configuration");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Seed for synthetic inputs")->capture_default_str();
  app.add_option("--parallel", parallel, "Worker threads for independent fits and runs")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  app.add_option("--set", overrides, "Override a config value, section.key=value");

  auto* calibrate = app.add_subcommand("calibrate", "Fit SEI, X map and LAM parameters from datasets");
  auto* simulate = app.add_subcommand("simulate", "Run the coupled model and write a fade trajectory");
  auto* eol = app.add_subcommand("eol", "Extrapolate years to end of life");
  auto* analyze = app.add_subcommand("analyze", "C-rate and SOC occupancy histograms");
  for (auto* sub : {calibrate, simulate, eol, analyze}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  return run_guarded(
      [&] {
        RunConfig cfg = load_run_config(config_path);
        for (const auto& s : overrides) cfg.set(s);
        cfg.out_dir = out_dir;
        cfg.seed = seed;
        cfg.parallel = parallel;
        if (*calibrate) return cmd_calibrate(cfg);
        if (*simulate) return cmd_simulate(cfg);
        if (*eol) return cmd_eol(cfg);
        return cmd_analyze(cfg);
      },
      std::cerr);
}
