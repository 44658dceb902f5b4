// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "floqmet/floquet.hpp"

namespace floqmet {

/// y_N(x) = 2 x^N / [1 + x^N + (1 - x)^N] for x in [0, 1].  Saturates the
/// GHZ bound y = 2 x^N / (1 + x^N) from below; the powers underflow
/// gracefully at large N.
double y_n(double x, int n_atoms);

/// Long-time stroboscopic QFI of a probe dressed by one Floquet bound
/// state: F(t) ~ t2_coefficient * t^2 + offset with
///   t2_coefficient = y_N(Z^2) (N d eps_b/d omega0)^2,
///   offset        = N (d Z^2/d omega0)^2 / [Z^2 (1 - Z^2)].
struct AsymptoticQfi {
  double t2_coefficient = 0.0;
  double offset = 0.0;
  double at(double t) const { return t2_coefficient * t * t + offset; }
};

/// Requires the sensitivity fields of `b` (see fbs_derivatives).
AsymptoticQfi long_time_qfi(const FloquetBoundState& b, int n_atoms);

/// Finite-N steady-state population contribution, the pre-limit form of
/// the offset above.  Coincides with qfi_f2(Z^2, dZ^2, N).
double steady_f2(double z2, double dz2_domega0, int n_atoms);

/// Markovian GHZ-probe QFI
///   F(t) = 2 N^2 t^2 / [1 + (e^{2 kappa t} - 1)^N + e^{2 N kappa t}].
double markovian_qfi(double kappa, int n_atoms, double t);

/// Optimal interrogation of the Markovian probe.
struct MarkovianOptimum {
  double t_opt = 0.0;            ///< q / (N kappa) with q = [W(2/e^2)+2] / 2
  double f_max = 0.0;            ///< F(t_opt)
  double delta_omega_min = 0.0;  ///< [ (t_r / t_opt) f_max ]^{-1/2}
};
MarkovianOptimum markovian_optimum(double kappa, int n_atoms, double t_r);

/// Cramer-Rao precision bound 1 / sqrt(repetitions * fisher).
double cramer_rao_precision(double fisher, double repetitions);

} // namespace floqmet
