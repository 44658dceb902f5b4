// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floqmet/dynamics.hpp"
#include "floqmet/floquet.hpp"
#include "floqmet/qfi.hpp"

namespace floqmet {

/// Flat key = value configuration file.  Lines are `key = value`, blank, or
/// `#` comments.  Only keys from known_keys() are accepted; anything else
/// raises ConfigError naming the offending key.
class FlatConfig {
public:
  static FlatConfig load(const std::string& path);
  static FlatConfig parse(const std::string& text);

  bool has(const std::string& key) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;

  /// Model parameters from the keys omega0, g, h, omega_c, A, omega_T, N
  /// (defaults for the absent ones), validated.
  ModelParams params() const;

  static const std::vector<std::string>& known_keys();

private:
  std::map<std::string, std::string> values_;
};

/// Serialises the model parameters in config syntax (omega0, g, h, omega_c,
/// A, omega_T, N), one key per line.
std::string params_to_config(const ModelParams& p);

/// Comment block echoed at the top of every output file: tool line, format
/// version, and the full parameter set.
std::string csv_header(const ModelParams& p, const std::string& kind);

/// Number formatting used in all CSV columns (shortest round-trip).
std::string format_double(double v);

void write_trajectory_csv(const std::string& path,
                          const AmplitudeTrajectory& traj);

/// QFI series table; when `markovian_kappa` is set a closed-form Markovian
/// column at matched kappa is appended.
void write_qfi_csv(const std::string& path, const ModelParams& p,
                   const std::vector<QfiResult>& series,
                   std::optional<double> markovian_kappa = std::nullopt);

/// Branch table (axis_value, n_branches, epsilon_b_1, Z_1, epsilon_b_2,
/// Z_2) and the separate folded band-edge table.
void write_scan_csv(const std::string& branches_path,
                    const std::string& edges_path, const ModelParams& p,
                    const SpectrumScan& scan);

} // namespace floqmet
