// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "floqmet/floquet.hpp"

namespace floqmet {

/// One sample of the residue curve Z^2(A).
struct ResiduePoint {
  double amplitude = 0.0;
  bool has_fbs = false;
  double z2 = 0.0;        ///< valid when has_fbs
  double epsilon_b = 0.0; ///< valid when has_fbs
};

/// Tabulates Z^2 against the drive amplitude.  Amplitudes without a bound
/// state are flagged rather than dropped.  When several branches coexist
/// the one with the largest residue is reported.
std::vector<ResiduePoint> residue_curve(const ModelParams& p,
                                        std::span<const double> amplitudes,
                                        int n_max = 0, int workers = 0);

/// Amplitude intervals [lo, hi] supporting a bound state, located by
/// scanning [a_min, a_max] at `step` and bisecting each existence flip to
/// `resolution`.
std::vector<Interval> fbs_regions(const ModelParams& p, double a_min,
                                  double a_max, double step = 0.2,
                                  double resolution = 0.05, int n_max = 0,
                                  int workers = 0);

/// Outcome of inverting Z^2(A) = e^{-a/N}.
struct DesignResult {
  int n_atoms = 0;
  double a = 0.0;     ///< requested exponent
  double a_opt = 0.0; ///< smallest amplitude meeting the target
  double z2 = 0.0;    ///< achieved residue squared
  double y_value = 0.0;            ///< y_N(z2), the long-time QFI prefactor
  double predicted_prefactor = 0.0; ///< 2 / (e^a + 1), the large-N limit
  int branch = 0;                   ///< index of the amplitude region searched
};

/// Inverts the residue curve on amplitude region `branch` (0 = lowest):
/// tabulates Z^2(A) at `curve_step`, picks the smallest-A monotone segment
/// that brackets the target e^{-a/N}, and bisects until |Z^2 - target| <
/// tol.  Throws DomainError, reporting the achievable residue range, when
/// the target cannot be met on that region.
DesignResult design_optimal_a(const ModelParams& p, int n_atoms,
                              double a = 1.1, double tol = 1e-4,
                              int branch = 0, int n_max = 0,
                              double curve_step = 0.05, int workers = 0);

/// design_optimal_a over several probe sizes, sharing one tabulated curve.
std::vector<DesignResult> design_sweep(const ModelParams& p,
                                       std::span<const int> n_values,
                                       double a = 1.1, double tol = 1e-4,
                                       int branch = 0, int n_max = 0,
                                       double curve_step = 0.05,
                                       int workers = 0);

} // namespace floqmet
