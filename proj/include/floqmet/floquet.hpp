// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "floqmet/model.hpp"

namespace floqmet {

/// A Floquet bound state outside the quasienergy continua.
struct FloquetBoundState {
  double epsilon_b = 0.0; ///< quasienergy, folded into the solved zone
  double residue = 0.0;   ///< Z = |sum_n c_n|^2, the stroboscopic weight
  std::vector<double> coeffs; ///< Fourier coefficients c_n, n = -n_max..n_max
  int n_max = 0;
  /// Sensitivities d epsilon_b / d omega0 and d Z^2 / d omega0; NaN until
  /// filled in by fbs_derivatives().
  double d_epsilon_domega0 = std::numeric_limits<double>::quiet_NaN();
  double d_z2_domega0 = std::numeric_limits<double>::quiet_NaN();
};

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// One Brillouin copy of the reservoir band, clipped to the inspected
/// quasienergy window.
struct BandCopy {
  int index = 0; ///< copy offset m (band centred at omega_c + m omega_T)
  double lo = 0.0;
  double hi = 0.0;
};

/// Reservoir self-energy of Brillouin copy m at quasienergy epsilon,
///   Sigma_m(eps) = 2 g^2 K[(4h/E)^2] / (pi E),  E = eps - m omega_T - omega_c,
/// defined for |E| > 4h (outside the band copy); throws DomainError inside.
double self_energy(double epsilon, int copy, const ModelParams& p);

/// d Sigma_m / d epsilon in closed form,
///   -2 g^2 E[(4h/E)^2] / (pi (E^2 - 16 h^2)).
double self_energy_slope(double epsilon, int copy, const ModelParams& p);

/// The (2 n_max + 1)-dimensional Floquet matrix Y(eps) in the frequency
/// basis n = -n_max..n_max.  For this drive it is real symmetric
/// tridiagonal: diagonal omega0 + A/2 + n omega_T + Sigma_n(eps),
/// off-diagonal -A/4.
struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> off; ///< size diag.size() - 1
};
TridiagonalMatrix floquet_matrix(double epsilon, const ModelParams& p,
                                 int n_max);

/// Band copies intersecting [lo, hi].
std::vector<BandCopy> band_copies_in(const ModelParams& p, double lo,
                                     double hi);

/// Maximal sub-intervals of [lo, hi] free of any band copy, shrunk by
/// `edge_margin` on every side that touches a band edge.  Empty whenever
/// omega_T <= 8h (neighbouring copies overlap and close every gap).
std::vector<Interval> gap_segments(const ModelParams& p, double lo, double hi,
                                   double edge_margin);

/// Truncation order used when the caller passes n_max <= 0.
int default_n_max(const ModelParams& p);

/// Solves the self-consistent bound-state condition Y(eps) c = eps c inside
/// the gaps of the first Brillouin zone [-omega_T/2, omega_T/2): a grid scan
/// of chi(eps) = (eigenvalue of Y nearest eps) - eps at step 1e-3 h followed
/// by bisection on each sign change.  Coefficients are normalised against
/// the frequency-dependent metric, c^T G(eps) c = 1, and the residue is
/// Z = (sum_n c_n)^2.  Returns the states sorted by quasienergy; empty when
/// no gap or no root exists.
std::vector<FloquetBoundState> solve_fbs(const ModelParams& p, int n_max = 0);

/// Same root search restricted to the gaps of an arbitrary window
/// [lo, hi); used for zone-translation checks.
std::vector<FloquetBoundState> solve_fbs_in(const ModelParams& p, int n_max,
                                            double lo, double hi);

/// Central finite differences of epsilon_b and Z^2 over omega0 (step
/// `delta`) for branch `branch` of solve_fbs(p, n_max).  A delta/2 pass is
/// compared against the delta pass (Richardson consistency, 1e-4 relative)
/// and the delta/2 estimate is returned; inconsistency or a lost root
/// throws NumericalError.
FloquetBoundState fbs_derivatives(const ModelParams& p, int n_max = 0,
                                  double delta = 1e-3, int branch = 0);

enum class ScanAxis { amplitude, drive_frequency };

/// Quasienergy spectrum versus a drive parameter: per scan value the FBS
/// branches (solve_fbs) and the folded band copies of the first zone.
struct SpectrumScan {
  ScanAxis axis = ScanAxis::amplitude;
  std::vector<double> values;
  std::vector<std::vector<FloquetBoundState>> branches; ///< per value
  std::vector<std::vector<BandCopy>> band_edges;        ///< per value
};

/// Evaluates solve_fbs over `values` of the chosen axis.  Points are
/// independent and are distributed over `workers` threads (<= 0 picks the
/// hardware concurrency); results are gathered in axis order so output is
/// deterministic.
SpectrumScan scan_spectrum(const ModelParams& p, ScanAxis axis,
                           std::span<const double> values, int n_max = 0,
                           int workers = 0);

} // namespace floqmet
