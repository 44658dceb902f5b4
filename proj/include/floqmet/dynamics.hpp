// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "floqmet/model.hpp"

namespace floqmet {

/// Excited-state amplitude c(t) of the emitter together with its
/// sensitivity dc/domega0, sampled on the uniform grid t_i = i dt.
/// The step is always commensurate with the drive period:
/// dt * steps_per_period == T, so stroboscopic times n T fall exactly on
/// grid points.
struct AmplitudeTrajectory {
  ModelParams params;
  bool driven = false;
  double dt = 0.0;
  int steps_per_period = 0;
  std::vector<double> times;
  std::vector<std::complex<double>> c;
  std::vector<std::complex<double>> dc_domega0;
  /// Largest |norm - 1| of the full state vector seen by lattice_oracle
  /// (unitarity diagnostic); 0 for solve_amplitude.
  double lattice_norm_drift = 0.0;

  /// Grid index of the stroboscopic sample n T (throws if out of range).
  std::size_t period_index(int n) const;
};

/// Integrates the exact memory-kernel equation of motion
///   dc/dt = -i [omega0 + f(t)] c(t) - Int_0^t nu(t - s) c(s) ds,  c(0) = 1,
/// together with the linearised sensitivity equation for dc/domega0.
///
/// The fast phase exp{-i [omega0 t + Int f]} is removed analytically; the
/// residual Volterra system is advanced by an explicit predictor and a
/// trapezoidal corrector over the trapezoidal history quadrature
/// (second-order convergent in dt; exact when g = 0).
///
/// Preconditions: t_max > 0 and dt <= 0.05/h; when `driven`, also
/// dt <= T/40.  dt is shrunk to the nearest divisor of T.  Throws
/// NumericalError if |c| ever exceeds 1 by more than 1e-3.
AmplitudeTrajectory solve_amplitude(const ModelParams& p, double t_max,
                                    double dt, bool driven);

/// Brute-force cross-check: integrates the Schrodinger equation of the
/// full single-excitation problem -- the emitter plus all L^2 reservoir
/// modes of an L x L momentum grid -- with a fixed-step RK4 integrator,
/// and records c(t) on the same commensurate grid as solve_amplitude.
/// `internal_dt` <= 0 picks a step that resolves the largest mode
/// frequency.  The sensitivity channel is not propagated (left zero).
/// Requires even L >= 32.
AmplitudeTrajectory lattice_oracle(const ModelParams& p, int lattice_size,
                                   double t_max, double dt, bool driven,
                                   double internal_dt = 0.0);

/// Born-Markov reduction of the reservoir: decay rate kappa, Lamb shift
/// delta, and the per-shot duration t_r used for repetition counting.
struct MarkovianModel {
  double kappa = 0.0;
  double delta = 0.0;
  double t_r = 0.0;
};

/// kappa = pi J(omega0) and delta = P Int J(omega) / (omega0 - omega)
/// d(omega), the latter via symmetric-excision quadrature (half-width
/// `excision` around omega0).  kappa = 0 outside the band.
MarkovianModel markovian_params(const ModelParams& p, double excision = 1e-4);

/// Markovian amplitude c(t) = exp{ -kappa t - i [omega0 + delta] t }.
std::complex<double> markovian_amplitude(const MarkovianModel& m,
                                         double omega0, double t);

} // namespace floqmet
