// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "floqmet/dynamics.hpp"

namespace floqmet {

/// Quantum Fisher information of the N-emitter GHZ probe at one time.
struct QfiResult {
  double t = 0.0;
  double f_total = 0.0;
  double f1 = 0.0; ///< coherent (GHZ block) contribution
  double f2 = 0.0; ///< populations-only contribution
};

/// Fisher information of the 2x2 coherence block spanned by |e...e> and
/// |g...g>, evaluated from the single-emitter amplitude c and its
/// sensitivity dc = dc/domega0.  Analytic eigen-decomposition of the block;
/// eigenvalues below 1e-14 x trace are treated as rank-deficient.
double qfi_f1(std::complex<double> c, std::complex<double> dc, int n_atoms);

/// Fisher information of the diagonal (population) sector, in closed form
/// from p = |c|^2 and dp = dp/domega0.  Zero for n_atoms = 1.
double qfi_f2(double p, double dp, int n_atoms);

/// F(t) = F1 + F2 along a trajectory.
std::vector<QfiResult> qfi_series(const AmplitudeTrajectory& traj,
                                  int n_atoms);

/// Independent oracle: builds the full 2^N x 2^N probe state from (c, dc),
/// eigendecomposes it at omega0 and omega0 +/- delta, forms eigenvalue and
/// eigenvector derivatives by central finite differences (with phase and
/// degenerate-subspace alignment), and sums the spectral representation of
/// the QFI.  A delta/2 pass must agree to 1e-6 relative or NumericalError
/// is thrown.  Restricted to n_atoms <= 6.
double brute_force_qfi(std::complex<double> c, std::complex<double> dc,
                       int n_atoms, double delta = 1e-4);

} // namespace floqmet
