#ifndef CAPFADE_IO_HPP
#define CAPFADE_IO_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "capfade/aging.hpp"
#include "capfade/calibration.hpp"
#include "capfade/ecm.hpp"
#include "capfade/error.hpp"
#include "capfade/profile.hpp"
#include "capfade/scenario.hpp"
#include "capfade/units.hpp"
#include "capfade/xmap.hpp"

namespace capfade::io {

namespace fs = std::filesystem;

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, end);
}

/// Celsius text for a kelvin value, rounded to 1e-9 K so that offsets like
/// 318.15 - 273.15 print as 45.
inline std::string format_celsius(double temp_k) {
  return format_double(std::round(kelvin_to_celsius(temp_k) * 1e9) / 1e9);
}

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> to_double(std::string_view s) noexcept {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// A parsed numeric CSV: `# key=value` comment metadata, a header, and rows.
struct CsvTable {
  std::string path;
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> lines;  // source line of each row

  [[nodiscard]] ValidationError error_at(std::size_t row, const std::string& what) const {
    return ValidationError(path + ": row " + std::to_string(row + 1) + " (line " + std::to_string(lines[row]) + "): " + what);
  }

  [[nodiscard]] std::optional<double> meta_double(const std::string& key) const {
    auto it = meta.find(key);
    if (it == meta.end()) return std::nullopt;
    auto v = to_double(it->second);
    if (!v) throw ValidationError(path + ": metadata '" + key + "' is not a number");
    return v;
  }
};

/// Reads a CSV whose header must equal one of `accepted_headers`.
inline CsvTable read_csv(const fs::path& path, const std::vector<std::vector<std::string>>& accepted_headers) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  CsvTable t;
  t.path = path.string();
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      auto body = trim(s.substr(1));
      auto eq = body.find('=');
      if (eq != std::string_view::npos)
        t.meta[std::string(trim(body.substr(0, eq)))] = std::string(trim(body.substr(eq + 1)));
      continue;
    }
    if (!have_header) {
      t.header = split(s);
      bool ok = false;
      for (const auto& h : accepted_headers) ok = ok || h == t.header;
      if (!ok) {
        std::string expected;
        for (const auto& h : accepted_headers) {
          if (!expected.empty()) expected += " or ";
          for (std::size_t i = 0; i < h.size(); ++i) expected += (i ? "," : "") + h[i];
        }
        throw ValidationError(t.path + ": unexpected header '" + std::string(s) + "', expected " + expected);
      }
      have_header = true;
      continue;
    }
    auto cells = split(s);
    const std::size_t row = t.rows.size();
    t.lines.push_back(line_no);
    if (cells.size() != t.header.size()) {
      throw t.error_at(row, "expected " + std::to_string(t.header.size()) + " fields, got " + std::to_string(cells.size()));
    }
    std::vector<double> values;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      auto v = to_double(cells[c]);
      if (!v) {
        throw t.error_at(row, "field '" + t.header[c] + "' is not a number: '" + cells[c] + "'");
      }
      values.push_back(*v);
    }
    t.rows.push_back(std::move(values));
  }
  if (!have_header) throw ValidationError(t.path + ": empty file");
  if (t.rows.empty()) throw ValidationError(t.path + ": no data rows");
  return t;
}

namespace detail {

inline void check_increasing_times(const CsvTable& t) {
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i == 0 && t.rows[0][0] < 0.0) throw t.error_at(0, "negative time");
    if (i > 0 && !(t.rows[i][0] > t.rows[i - 1][0])) throw t.error_at(i, "time not strictly increasing");
  }
}

// Span covered by the last row: explicit duration_s metadata, otherwise the
// last sample spacing repeated.
inline double implied_duration(const CsvTable& t, const char* key) {
  if (auto d = t.meta_double(key)) return *d;
  const auto& r = t.rows;
  if (r.size() == 1) return r[0][0];
  return r.back()[0] + (r.back()[0] - r[r.size() - 2][0]);
}

inline std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  return out;
}

inline boost::property_tree::ptree read_ini(const fs::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  return tree;
}

inline double ini_double(const boost::property_tree::ptree& tree, const std::string& key, const fs::path& path) {
  auto s = tree.get_optional<std::string>(key);
  if (!s) throw ConfigError(path.string() + ": missing key '" + key + "'");
  auto v = to_double(*s);
  if (!v) throw ConfigError(path.string() + ": key '" + key + "' is not a number");
  return *v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Battery parameters (key = value)

inline BatteryParams load_battery_params(const fs::path& path) {
  auto tree = detail::read_ini(path);
  BatteryParams p{detail::ini_double(tree, "nominal_capacity_ah", path), detail::ini_double(tree, "k_sei", path),
                  detail::ini_double(tree, "e_sei", path), detail::ini_double(tree, "k_am", path),
                  detail::ini_double(tree, "e_am", path)};
  p.validate();
  return p;
}

inline void write_battery_params(const fs::path& path, const BatteryParams& p) {
  auto out = detail::open_out(path);
  out << "# capacity in Ah, k_sei in 1/s^0.5, k_am in 1/Ah, activation energies in J/mol\n"
      << "nominal_capacity_ah = " << format_double(p.nominal_capacity_ah) << "\n"
      << "k_sei = " << format_double(p.k_sei) << "\n"
      << "e_sei = " << format_double(p.e_sei) << "\n"
      << "k_am = " << format_double(p.k_am) << "\n"
      << "e_am = " << format_double(p.e_am) << "\n";
}

// ---------------------------------------------------------------------------
// X map: soc_frac,temp_c,x

inline XMap load_xmap_csv(const fs::path& path) {
  auto t = read_csv(path, {{"soc_frac", "temp_c", "x"}});
  std::vector<XKnot> knots;
  for (const auto& r : t.rows) knots.push_back({r[0], celsius_to_kelvin(r[1]), r[2]});
  try {
    return XMap(std::move(knots));
  } catch (const ConfigError& e) {
    throw ConfigError(t.path + ": " + e.what());
  }
}

inline void write_xmap_csv(const fs::path& path, std::span<const XKnot> knots) {
  auto out = detail::open_out(path);
  out << "soc_frac,temp_c,x\n";
  for (const auto& k : knots)
    out << format_double(k.soc) << "," << format_celsius(k.temp_k) << "," << format_double(k.x) << "\n";
}

// ---------------------------------------------------------------------------
// ECM parameters: r0, r1, c1, capacity_ah plus `ocv_table = <csv path>` or
// inline `ocv = soc:volts, soc:volts, ...`

inline std::vector<OcvPoint> load_ocv_csv(const fs::path& path) {
  auto t = read_csv(path, {{"soc_frac", "ocv_v"}});
  std::vector<OcvPoint> pts;
  for (const auto& r : t.rows) pts.push_back({r[0], r[1]});
  return pts;
}

inline EcmParams load_ecm_params(const fs::path& path) {
  auto tree = detail::read_ini(path);
  EcmParams p{detail::ini_double(tree, "r0", path), detail::ini_double(tree, "r1", path),
              detail::ini_double(tree, "c1", path), detail::ini_double(tree, "capacity_ah", path), {}};
  if (auto table = tree.get_optional<std::string>("ocv_table")) {
    fs::path ref = *table;
    if (ref.is_relative()) ref = path.parent_path() / ref;
    p.ocv_curve = load_ocv_csv(ref);
  } else if (auto inline_pts = tree.get_optional<std::string>("ocv")) {
    for (const auto& item : split(*inline_pts, ',')) {
      auto parts = split(item, ':');
      std::optional<double> soc;
      std::optional<double> volts;
      if (parts.size() == 2) {
        soc = to_double(parts[0]);
        volts = to_double(parts[1]);
      }
      if (!soc || !volts) throw ConfigError(path.string() + ": malformed ocv entry '" + item + "'");
      p.ocv_curve.push_back({*soc, *volts});
    }
  } else {
    throw ConfigError(path.string() + ": needs 'ocv_table' or 'ocv'");
  }
  try {
    p.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return p;
}

inline void write_ecm_params(const fs::path& path, const EcmParams& p) {
  auto out = detail::open_out(path);
  out << "r0 = " << format_double(p.r0) << "\n"
      << "r1 = " << format_double(p.r1) << "\n"
      << "c1 = " << format_double(p.c1) << "\n"
      << "capacity_ah = " << format_double(p.capacity_ah) << "\n"
      << "ocv = ";
  for (std::size_t i = 0; i < p.ocv_curve.size(); ++i)
    out << (i ? ", " : "") << format_double(p.ocv_curve[i].soc) << ":" << format_double(p.ocv_curve[i].volts);
  out << "\n";
}

// ---------------------------------------------------------------------------
// Current profiles: time_s,current_a[,temp_c]; positive current = discharge.
// `# period_s=<v>` marks a periodic profile, `# duration_s=<v>` the end of a
// non-periodic one.

inline CurrentProfile load_profile_csv(const fs::path& path, double default_temp_k) {
  auto t = read_csv(path, {{"time_s", "current_a"}, {"time_s", "current_a", "temp_c"}});
  detail::check_increasing_times(t);
  if (t.rows.front()[0] != 0.0) throw t.error_at(0, "profile must start at time 0");
  const bool has_temp = t.header.size() == 3;
  std::vector<ProfileSample> samples;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    double temp = has_temp ? celsius_to_kelvin(r[2]) : default_temp_k;
    if (!(temp > 0.0)) throw t.error_at(i, "temperature below absolute zero");
    samples.push_back({r[0], r[1], temp});
  }
  const auto period = t.meta_double("period_s");
  if (period && !(*period > t.rows.back()[0]))
    throw ValidationError(t.path + ": period_s must exceed the last sample time");
  const double duration = period ? *period : detail::implied_duration(t, "duration_s");
  try {
    return CurrentProfile(std::move(samples), duration, period.has_value());
  } catch (const ValidationError& e) {
    throw ValidationError(t.path + ": " + e.what());
  }
}

inline void write_profile_csv(const fs::path& path, const CurrentProfile& profile) {
  auto out = detail::open_out(path);
  if (profile.periodic())
    out << "# period_s=" << format_double(profile.period()) << "\n";
  else
    out << "# duration_s=" << format_double(profile.duration()) << "\n";
  out << "time_s,current_a,temp_c\n";
  for (const auto& s : profile.samples())
    out << format_double(s.time_s) << "," << format_double(s.current_a) << "," << format_celsius(s.temp_k) << "\n";
}

// ---------------------------------------------------------------------------
// Calibration datasets: time_s,loss_pct with `# kind=`, `# soc_frac=`,
// `# temp_c=`, and for cycling sets `# profile=<csv>` (relative to the file).

inline CalibrationDataset load_dataset_csv(const fs::path& path) {
  auto t = read_csv(path, {{"time_s", "loss_pct"}});
  detail::check_increasing_times(t);
  CalibrationDataset d;
  d.name = path.stem().string();
  auto kind = t.meta.count("kind") ? t.meta.at("kind") : std::string("calendar");
  if (kind == "calendar") {
    d.kind = DatasetKind::calendar;
  } else if (kind == "cycling") {
    d.kind = DatasetKind::cycling;
  } else {
    throw ValidationError(t.path + ": kind must be 'calendar' or 'cycling'");
  }
  auto soc = t.meta_double("soc_frac");
  auto temp_c = t.meta_double("temp_c");
  if (d.kind == DatasetKind::calendar && (!soc || !temp_c))
    throw ValidationError(t.path + ": calendar datasets need soc_frac and temp_c metadata");
  if (soc) d.soc = *soc;
  if (temp_c) d.temp_k = celsius_to_kelvin(*temp_c);
  if (auto it = t.meta.find("profile"); it != t.meta.end()) {
    fs::path ref = it->second;
    if (ref.is_relative()) ref = path.parent_path() / ref;
    d.profile_path = ref.string();
  }
  if (d.kind == DatasetKind::cycling && d.profile_path.empty())
    throw ValidationError(t.path + ": cycling datasets need a profile metadata entry");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i][1] < 0.0) throw t.error_at(i, "negative capacity loss");
    d.points.push_back({t.rows[i][0], t.rows[i][1]});
  }
  try {
    d.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(t.path + ": " + e.what());
  }
  return d;
}

inline void write_dataset_csv(const fs::path& path, const CalibrationDataset& d, const std::string& profile_ref = {}) {
  auto out = detail::open_out(path);
  out << "# kind=" << (d.kind == DatasetKind::calendar ? "calendar" : "cycling") << "\n";
  out << "# soc_frac=" << format_double(d.soc) << "\n";
  out << "# temp_c=" << format_celsius(d.temp_k) << "\n";
  if (!profile_ref.empty()) out << "# profile=" << profile_ref << "\n";
  out << "time_s,loss_pct\n";
  for (const auto& p : d.points) out << format_double(p.time_s) << "," << format_double(p.loss_pct) << "\n";
}

// ---------------------------------------------------------------------------
// Household traces: time_s,pv_w,load_w,temp_c

inline HouseholdTrace load_household_trace_csv(const fs::path& path) {
  auto t = read_csv(path, {{"time_s", "pv_w", "load_w", "temp_c"}});
  detail::check_increasing_times(t);
  HouseholdTrace trace;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    if (r[1] < 0.0 || r[2] < 0.0) throw t.error_at(i, "negative power");
    trace.samples.push_back({r[0], r[1], r[2], celsius_to_kelvin(r[3])});
  }
  trace.duration_s = detail::implied_duration(t, "duration_s");
  try {
    trace.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(t.path + ": " + e.what());
  }
  return trace;
}

inline void write_household_trace_csv(const fs::path& path, const HouseholdTrace& trace) {
  auto out = detail::open_out(path);
  out << "# duration_s=" << format_double(trace.duration_s) << "\n";
  out << "time_s,pv_w,load_w,temp_c\n";
  for (const auto& s : trace.samples)
    out << format_double(s.time_s) << "," << format_double(s.pv_w) << "," << format_double(s.load_w) << ","
        << format_celsius(s.temp_k) << "\n";
}

// ---------------------------------------------------------------------------
// Trajectories: time_s,q_sei_pct,q_am_pct,q_total_pct

inline void write_trajectory_csv(const fs::path& path, const FadeTrajectory& traj) {
  auto out = detail::open_out(path);
  out << "time_s,q_sei_pct,q_am_pct,q_total_pct\n";
  for (const auto& p : traj.points)
    out << format_double(p.time_s) << "," << format_double(p.q_sei) << "," << format_double(p.q_am) << ","
        << format_double(p.q_total) << "\n";
}

inline FadeTrajectory load_trajectory_csv(const fs::path& path) {
  auto t = read_csv(path, {{"time_s", "q_sei_pct", "q_am_pct", "q_total_pct"}});
  detail::check_increasing_times(t);
  FadeTrajectory traj;
  traj.label = path.stem().string();
  for (const auto& r : t.rows) traj.points.push_back({r[0], r[1], r[2], r[3]});
  return traj;
}

// ---------------------------------------------------------------------------
// Histograms: bin_low,bin_high,seconds

inline void write_histogram_csv(const fs::path& path, const Histogram& h) {
  auto out = detail::open_out(path);
  out << "bin_low,bin_high,seconds\n";
  for (std::size_t i = 0; i < h.seconds.size(); ++i)
    out << format_double(h.edges[i]) << "," << format_double(h.edges[i + 1]) << "," << format_double(h.seconds[i]) << "\n";
}

}  // namespace capfade::io

#endif
