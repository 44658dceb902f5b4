// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include "floqmet/model.hpp"

#include <cmath>
#include <string>

#include "floqmet/errors.hpp"
#include "floqmet/special_functions.hpp"

namespace floqmet {

void ModelParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(omega0 >= 0.0)) fail("omega0 must be >= 0");
  if (!(g >= 0.0)) fail("g must be >= 0");
  if (!(hopping > 0.0)) fail("h must be > 0");
  if (!(drive_amplitude >= 0.0)) fail("A must be >= 0");
  if (!(drive_frequency > 0.0)) fail("omega_T must be > 0");
  if (n_atoms < 1) fail("N must be >= 1");
}

double drive_field(double t, const ModelParams& p) {
  return 0.5 * p.drive_amplitude * (1.0 - std::cos(p.drive_frequency * t));
}

double drive_phase(double t, const ModelParams& p) {
  return 0.5 * p.drive_amplitude *
         (t - std::sin(p.drive_frequency * t) / p.drive_frequency);
}

double spectral_density(double omega, const ModelParams& p) {
  const double h = p.hopping;
  double u = (omega - p.omega_c) / (4.0 * h);
  if (std::abs(u) >= 1.0) return 0.0;
  // Clamp evaluations inside the +/- 1e-6 h van Hove window to its edge so
  // quadrature nodes cannot land on the logarithmic divergence.
  const double u_min = 1e-6 / 4.0;
  if (std::abs(u) < u_min) u = u_min;
  constexpr double two_pi2 = 2.0 * 3.141592653589793238462643383279502884 *
                             3.141592653589793238462643383279502884;
  return p.g * p.g / (two_pi2 * h) * elliptic_k(1.0 - u * u);
}

std::complex<double> correlation_function(double t, const ModelParams& p) {
  double b = bessel_j0(2.0 * p.hopping * t);
  return p.g * p.g * b * b *
         std::exp(std::complex<double>(0.0, -p.omega_c * t));
}

} // namespace floqmet
