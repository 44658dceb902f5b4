// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include "floqmet/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "floqmet/asymptotics.hpp"
#include "floqmet/errors.hpp"

namespace floqmet {

namespace {

constexpr int kFormatVersion = 1;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& raw) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not a number: '" + raw +
                      "'");
  }
  if (used != raw.size())
    throw ConfigError("config: key '" + key + "' has trailing characters: '" +
                      raw + "'");
  return v;
}

} // namespace

FlatConfig FlatConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

FlatConfig FlatConfig::parse(const std::string& text) {
  FlatConfig cfg;
  const std::vector<std::string>& known = known_keys();
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) +
                        " has no '=': '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config: unknown key '" + key + "' on line " +
                        std::to_string(line_no));
    if (cfg.values_.count(key))
      throw ConfigError("config: duplicate key '" + key + "' on line " +
                        std::to_string(line_no));
    cfg.values_[key] = value;
  }
  return cfg;
}

bool FlatConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

double FlatConfig::get_double(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("config: missing required key '" + key + "'");
  return parse_double(key, it->second);
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int FlatConfig::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const double v = parse_double(key, it->second);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config: key '" + key + "' must be an integer, got '" +
                      it->second + "'");
  return i;
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config: key '" + key + "' must be a boolean, got '" +
                    it->second + "'");
}

std::string FlatConfig::get_string(const std::string& key,
                                   const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

ModelParams FlatConfig::params() const {
  ModelParams p;
  p.omega0 = get_double("omega0", p.omega0);
  p.g = get_double("g", p.g);
  p.hopping = get_double("h", p.hopping);
  p.omega_c = get_double("omega_c", p.omega_c);
  p.drive_amplitude = get_double("A", p.drive_amplitude);
  p.drive_frequency = get_double("omega_T", p.drive_frequency);
  p.n_atoms = get_int("N", p.n_atoms);
  p.validate();
  return p;
}

const std::vector<std::string>& FlatConfig::known_keys() {
  static const std::vector<std::string> keys = {
      // Model.
      "omega0", "g", "h", "omega_c", "A", "omega_T", "N",
      // Run options (the CLI reads these; flags override).
      "t_max", "dt", "driven", "lattice_size", "t_r", "n_max", "workers",
      "delta", "branch", "a", "tol", "axis", "from", "to", "step",
      "curve_step", "n_list", "markovian", "derivatives"};
  return keys;
}

std::string params_to_config(const ModelParams& p) {
  std::ostringstream out;
  out << "omega0 = " << format_double(p.omega0) << '\n'
      << "g = " << format_double(p.g) << '\n'
      << "h = " << format_double(p.hopping) << '\n'
      << "omega_c = " << format_double(p.omega_c) << '\n'
      << "A = " << format_double(p.drive_amplitude) << '\n'
      << "omega_T = " << format_double(p.drive_frequency) << '\n'
      << "N = " << p.n_atoms << '\n';
  return out.str();
}

std::string csv_header(const ModelParams& p, const std::string& kind) {
  std::ostringstream out;
  out << "# floqmet " << kind << '\n'
      << "# format_version = " << kFormatVersion << '\n';
  std::istringstream params(params_to_config(p));
  std::string line;
  while (std::getline(params, line)) out << "# " << line << '\n';
  return out.str();
}

std::string format_double(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc())
    throw NumericalError("format_double: conversion failed");
  return std::string(buf, end);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw ConfigError("cannot open output file '" + path + "'");
  return out;
}

} // namespace

void write_trajectory_csv(const std::string& path,
                          const AmplitudeTrajectory& traj) {
  std::ofstream out = open_out(path);
  out << csv_header(traj.params, "trajectory");
  out << "t,re_c,im_c,abs2_c,re_dc_domega0,im_dc_domega0\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << format_double(traj.times[i]) << ',' << format_double(traj.c[i].real())
        << ',' << format_double(traj.c[i].imag()) << ','
        << format_double(std::norm(traj.c[i])) << ','
        << format_double(traj.dc_domega0[i].real()) << ','
        << format_double(traj.dc_domega0[i].imag()) << '\n';
  }
  if (!out)
    throw ConfigError("failed while writing '" + path + "'");
}

void write_qfi_csv(const std::string& path, const ModelParams& p,
                   const std::vector<QfiResult>& series,
                   std::optional<double> markovian_kappa) {
  std::ofstream out = open_out(path);
  out << csv_header(p, "qfi");
  out << "t,f_total,f1,f2,f_total_over_t2,f_total_over_t";
  if (markovian_kappa) out << ",f_markovian";
  out << '\n';
  for (const QfiResult& r : series) {
    const double over_t2 = r.t > 0.0 ? r.f_total / (r.t * r.t) : 0.0;
    const double over_t = r.t > 0.0 ? r.f_total / r.t : 0.0;
    out << format_double(r.t) << ',' << format_double(r.f_total) << ','
        << format_double(r.f1) << ',' << format_double(r.f2) << ','
        << format_double(over_t2) << ',' << format_double(over_t);
    if (markovian_kappa)
      out << ',' << format_double(markovian_qfi(*markovian_kappa, p.n_atoms,
                                                r.t));
    out << '\n';
  }
  if (!out)
    throw ConfigError("failed while writing '" + path + "'");
}

void write_scan_csv(const std::string& branches_path,
                    const std::string& edges_path, const ModelParams& p,
                    const SpectrumScan& scan) {
  const char* axis_name =
      scan.axis == ScanAxis::amplitude ? "A" : "omega_T";
  std::size_t max_branches = 2;
  for (const auto& states : scan.branches)
    max_branches = std::max(max_branches, states.size());

  {
    std::ofstream out = open_out(branches_path);
    out << csv_header(p, "spectrum branches");
    out << "# axis = " << axis_name << '\n';
    out << "axis_value,n_branches";
    for (std::size_t b = 1; b <= max_branches; ++b)
      out << ",epsilon_b_" << b << ",z_" << b;
    out << '\n';
    for (std::size_t i = 0; i < scan.values.size(); ++i) {
      const auto& states = scan.branches[i];
      out << format_double(scan.values[i]) << ',' << states.size();
      for (std::size_t b = 0; b < max_branches; ++b) {
        if (b < states.size())
          out << ',' << format_double(states[b].epsilon_b) << ','
              << format_double(states[b].residue);
        else
          out << ",,";
      }
      out << '\n';
    }
    if (!out)
      throw ConfigError("failed while writing '" + branches_path + "'");
  }

  std::ofstream out = open_out(edges_path);
  out << csv_header(p, "spectrum band edges");
  out << "# axis = " << axis_name << '\n';
  out << "axis_value,copy_index,band_lo,band_hi\n";
  for (std::size_t i = 0; i < scan.values.size(); ++i) {
    for (const BandCopy& copy : scan.band_edges[i]) {
      out << format_double(scan.values[i]) << ',' << copy.index << ','
          << format_double(copy.lo) << ',' << format_double(copy.hi) << '\n';
    }
  }
  if (!out)
    throw ConfigError("failed while writing '" + edges_path + "'");
}

} // namespace floqmet
