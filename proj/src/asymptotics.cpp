// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include "floqmet/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "floqmet/errors.hpp"
#include "floqmet/qfi.hpp"
#include "floqmet/special_functions.hpp"

namespace floqmet {

double y_n(double x, int n_atoms) {
  if (n_atoms < 1) throw ConfigError("y_n: N must be >= 1");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("y_n: x must lie in [0, 1]");
  const double n = n_atoms;
  const double xn = std::pow(x, n);
  const double qn = std::pow(1.0 - x, n);
  return 2.0 * xn / (1.0 + xn + qn);
}

AsymptoticQfi long_time_qfi(const FloquetBoundState& b, int n_atoms) {
  if (n_atoms < 1) throw ConfigError("long_time_qfi: N must be >= 1");
  if (std::isnan(b.d_epsilon_domega0) || std::isnan(b.d_z2_domega0))
    throw ConfigError(
        "long_time_qfi: bound state carries no sensitivities; "
        "obtain it from fbs_derivatives");
  const double z2 = b.residue * b.residue;
  if (!(z2 > 0.0 && z2 <= 1.0))
    throw DomainError("long_time_qfi: residue out of (0, 1]");

  AsymptoticQfi out;
  const double slope = n_atoms * b.d_epsilon_domega0;
  out.t2_coefficient = y_n(z2, n_atoms) * slope * slope;
  if (b.d_z2_domega0 == 0.0) {
    out.offset = 0.0;
  } else {
    const double denom = z2 * (1.0 - z2);
    if (!(denom > 0.0))
      throw DomainError(
          "long_time_qfi: offset undefined at unit residue with nonzero "
          "residue sensitivity");
    out.offset = n_atoms * b.d_z2_domega0 * b.d_z2_domega0 / denom;
  }
  return out;
}

double steady_f2(double z2, double dz2, int n_atoms) {
  return qfi_f2(z2, dz2, n_atoms);
}

double markovian_qfi(double kappa, int n_atoms, double t) {
  if (n_atoms < 1) throw ConfigError("markovian_qfi: N must be >= 1");
  if (!(kappa >= 0.0)) throw DomainError("markovian_qfi: kappa must be >= 0");
  if (!(t >= 0.0)) throw DomainError("markovian_qfi: t must be >= 0");
  const double n = n_atoms;
  const double a = 2.0 * kappa * t;
  // 2 N^2 t^2 / (1 + (e^a - 1)^N + e^{N a}), rescaled by e^{-N a} so no
  // intermediate overflows.
  const double decay = std::exp(-n * a);
  const double body = std::pow(1.0 - std::exp(-a), n);
  return 2.0 * n * n * t * t * decay / (1.0 + body + decay);
}

MarkovianOptimum markovian_optimum(double kappa, int n_atoms, double t_r) {
  if (n_atoms < 1) throw ConfigError("markovian_optimum: N must be >= 1");
  if (!(kappa > 0.0)) throw DomainError("markovian_optimum: kappa must be > 0");
  MarkovianOptimum out;
  // Stationarity of 2 t^2 / (1 + e^{2 N kappa t}) at large N gives
  // N kappa t = (W(2 e^{-2}) + 2) / 2.
  const double q = 0.5 * (lambert_w(2.0 * std::exp(-2.0)) + 2.0) / kappa;
  out.t_opt = q / n_atoms;
  out.f_max = markovian_qfi(kappa, n_atoms, out.t_opt);
  if (t_r > 0.0)
    out.delta_omega_min = cramer_rao_precision(out.f_max, t_r / out.t_opt);
  else
    out.delta_omega_min = std::numeric_limits<double>::quiet_NaN();
  return out;
}

double cramer_rao_precision(double fisher, double repetitions) {
  if (!(fisher > 0.0))
    throw DomainError("cramer_rao_precision: Fisher information must be > 0");
  if (!(repetitions > 0.0))
    throw DomainError("cramer_rao_precision: repetitions must be > 0");
  return 1.0 / std::sqrt(repetitions * fisher);
}

} // namespace floqmet
