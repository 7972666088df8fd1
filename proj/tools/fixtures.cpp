// Regenerates the shipped data tree: default cell parameters, synthetic
// calibration datasets generated from those parameters, and a synthetic
// household trace.
//
//   capfade-fixtures <data-dir>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "capfade/capfade.hpp"
#include "capfade/io.hpp"

namespace fs = std::filesystem;
using namespace capfade;

namespace {

std::string tag(double soc, double temp_c) {
  return "soc" + std::to_string(static_cast<int>(std::lround(soc * 100))) + "_" +
         std::to_string(static_cast<int>(std::lround(temp_c))) + "c";
}

CalibrationDataset calendar_set(const BatteryParams& p, double soc, double temp_c, double x) {
  CalibrationDataset d;
  d.kind = DatasetKind::calendar;
  d.soc = soc;
  d.temp_k = celsius_to_kelvin(temp_c);
  for (int m = 1; m <= 12; ++m) {
    const double t = m * kSecondsPerYear / 12.0;
    d.points.push_back({t, calendar_loss(p.k_sei, p.e_sei, x, d.temp_k, t)});
  }
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: capfade-fixtures <data-dir>\n";
    return 1;
  }
  const fs::path root = argv[1];
  const auto params = lfp26650::battery_params();
  const auto knots = lfp26650::x_knots();
  const auto map = lfp26650::x_map();
  const auto ecm = lfp26650::ecm_params();

  io::write_battery_params(root / "lfp26650" / "battery.ini", params);
  io::write_xmap_csv(root / "lfp26650" / "xmap.csv", knots);
  io::write_ecm_params(root / "lfp26650" / "ecm.ini", ecm);

  // Reference trio: one SOC, one X, three temperatures.
  const fs::path cal = root / "calibration";
  for (double temp_c : {25.0, 35.0, 45.0})
    io::write_dataset_csv(cal / ("reference_" + tag(0.5, temp_c) + ".csv"), calendar_set(params, 0.5, temp_c, 0.2841));

  // One calendar set per X-map knot.
  for (const auto& k : knots) {
    const double temp_c = kelvin_to_celsius(k.temp_k);
    io::write_dataset_csv(cal / ("calendar_" + tag(k.soc, temp_c) + ".csv"), calendar_set(params, k.soc, temp_c, k.x));
  }

  // HEV cycling at three temperatures, 0.48 Ah per cycle, sampled every 5 days.
  for (double temp_c : {25.0, 35.0, 45.0}) {
    const auto profile = generate_hev_cycle(params.nominal_capacity_ah, 0.48, celsius_to_kelvin(temp_c));
    const std::string name = "hev_" + std::to_string(static_cast<int>(temp_c)) + "c";
    io::write_profile_csv(cal / (name + "_profile.csv"), profile);
    CalibrationDataset d;
    d.kind = DatasetKind::cycling;
    d.soc = 0.5;
    d.temp_k = celsius_to_kelvin(temp_c);
    CoupledSimulator sim(profile, params, map, ecm, 0.5);
    for (int day = 5; day <= 30; day += 5) {
      sim.advance_to(day * kSecondsPerDay);
      d.points.push_back({day * kSecondsPerDay, sim.fade().q_total()});
    }
    io::write_dataset_csv(cal / (name + ".csv"), d, name + "_profile.csv");
  }

  io::write_household_trace_csv(root / "household" / "synthetic_trace.csv", synthetic_household_trace());
  std::cout << "wrote fixtures under " << root << "\n";
  return 0;
}
