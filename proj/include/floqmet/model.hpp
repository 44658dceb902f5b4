// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <numbers>

namespace floqmet {

/// Physical parameters of a driven two-level emitter coupled to a 2D
/// square-lattice photonic reservoir.  Energies are expressed in units of
/// the lattice hopping rate `hopping` (h), times in 1/h, with hbar = 1.
struct ModelParams {
  double omega0 = 1.0;          ///< emitter transition frequency
  double g = 1.0;               ///< emitter-reservoir coupling strength
  double hopping = 1.0;         ///< nearest-neighbour hopping rate h
  double omega_c = 0.0;         ///< reservoir band centre
  double drive_amplitude = 0.0; ///< modulation amplitude A
  double drive_frequency = 12.0;///< modulation frequency omega_T
  int n_atoms = 1;              ///< number of emitters N in the GHZ probe

  /// Drive period T = 2 pi / omega_T.
  double period() const { return 2.0 * std::numbers::pi / drive_frequency; }

  /// Reservoir band edges omega_c -/+ 4h.
  double band_lo() const { return omega_c - 4.0 * hopping; }
  double band_hi() const { return omega_c + 4.0 * hopping; }

  /// Throws ConfigError unless omega0 >= 0, g >= 0, hopping > 0,
  /// drive_amplitude >= 0, drive_frequency > 0 and n_atoms >= 1.
  void validate() const;
};

/// Sinusoidal frequency modulation f(t) = (A/2)[1 - cos(omega_T t)].
/// Non-negative, period-T, zero at t = 0, mean A/2.
double drive_field(double t, const ModelParams& p);

/// Running integral of the drive, Int_0^t f(s) ds, evaluated in closed form.
double drive_phase(double t, const ModelParams& p);

/// Reservoir spectral density J(omega) = g^2 rho(omega) with rho the
/// square-lattice density of states; supported on |omega - omega_c| <= 4h
/// and normalised so that Int J = g^2.  The van Hove point omega = omega_c
/// is log-singular; evaluations inside a window of +/- 1e-6 h around it are
/// clamped to the window edge so quadratures never hit the divergence.
double spectral_density(double omega, const ModelParams& p);

/// Reservoir correlation function nu(t) = Int J(omega) e^{-i omega t}
/// d(omega) = g^2 e^{-i omega_c t} J0(2 h t)^2.
std::complex<double> correlation_function(double t, const ModelParams& p);

} // namespace floqmet
