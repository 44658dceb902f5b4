// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include "floqmet/design.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "floqmet/asymptotics.hpp"
#include "floqmet/errors.hpp"
#include "floqmet/parallel.hpp"

namespace floqmet {

namespace {

// Amplitude regions are searched within [0, kRegionSpan * omega_T]; the
// sideband ladder repeats on this scale and higher regions carry residues
// too small to target.
constexpr double kRegionSpan = 3.0;

ResiduePoint probe_amplitude(const ModelParams& p, double amplitude,
                             int n_max) {
  ModelParams q = p;
  q.drive_amplitude = amplitude;
  q.validate();
  ResiduePoint point;
  point.amplitude = amplitude;
  std::vector<FloquetBoundState> states = solve_fbs(q, n_max);
  for (const FloquetBoundState& s : states) {
    if (!point.has_fbs || s.residue > point.z2) {
      point.has_fbs = true;
      point.z2 = s.residue * s.residue;
      point.epsilon_b = s.epsilon_b;
    }
  }
  return point;
}

} // namespace

std::vector<ResiduePoint> residue_curve(const ModelParams& p,
                                        std::span<const double> amplitudes,
                                        int n_max, int workers) {
  p.validate();
  std::vector<ResiduePoint> curve(amplitudes.size());
  parallel_for(amplitudes.size(), workers, [&](std::size_t i) {
    curve[i] = probe_amplitude(p, amplitudes[i], n_max);
  });
  return curve;
}

std::vector<Interval> fbs_regions(const ModelParams& p, double a_min,
                                  double a_max, double step, double resolution,
                                  int n_max, int workers) {
  p.validate();
  if (!(a_min >= 0.0 && a_max > a_min))
    throw ConfigError("fbs_regions: need 0 <= a_min < a_max");
  if (!(step > 0.0 && resolution > 0.0))
    throw ConfigError("fbs_regions: step and resolution must be > 0");

  const int n_cells = std::max(1, static_cast<int>(std::ceil(
                                      (a_max - a_min) / step)));
  std::vector<double> grid(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i)
    grid[i] = a_min + (a_max - a_min) * i / n_cells;
  std::vector<char> exists(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    exists[i] = probe_amplitude(p, grid[i], n_max).has_fbs ? 1 : 0;
  });

  auto boundary = [&](double lo, double hi, bool lo_exists) {
    while (hi - lo > resolution) {
      const double mid = 0.5 * (lo + hi);
      if (probe_amplitude(p, mid, n_max).has_fbs == static_cast<bool>(lo_exists))
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<Interval> regions;
  double open = exists[0] ? grid[0] : 0.0;
  bool inside = exists[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (exists[i] == exists[i - 1]) continue;
    const double edge = boundary(grid[i - 1], grid[i], inside);
    if (inside) {
      regions.push_back({open, edge});
    } else {
      open = edge;
    }
    inside = !inside;
  }
  if (inside) regions.push_back({open, grid.back()});
  return regions;
}

namespace {

DesignResult invert_on_curve(const ModelParams& p,
                             const std::vector<ResiduePoint>& curve,
                             int n_atoms, double a, double tol, int branch,
                             int n_max) {
  if (n_atoms < 1) throw ConfigError("design_optimal_a: N must be >= 1");
  const double target = std::exp(-a / n_atoms);

  // Smallest-amplitude cell bracketing the target, endpoints both carrying
  // a bound state.
  std::size_t cell = curve.size();
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    if (!curve[i].has_fbs || !curve[i + 1].has_fbs) continue;
    if ((curve[i].z2 - target) * (curve[i + 1].z2 - target) <= 0.0) {
      cell = i;
      break;
    }
  }
  if (cell == curve.size()) {
    double z2_lo = 1.0, z2_hi = 0.0;
    for (const ResiduePoint& pt : curve) {
      if (!pt.has_fbs) continue;
      z2_lo = std::min(z2_lo, pt.z2);
      z2_hi = std::max(z2_hi, pt.z2);
    }
    if (z2_hi < z2_lo)
      throw DomainError("design_optimal_a: no bound state on this branch");
    throw DomainError(
        "design_optimal_a: target Z^2 = " + std::to_string(target) +
        " is outside the achievable range [" + std::to_string(z2_lo) + ", " +
        std::to_string(z2_hi) + "] on this branch");
  }

  double lo = curve[cell].amplitude, hi = curve[cell + 1].amplitude;
  double f_lo = curve[cell].z2 - target;
  DesignResult out;
  out.n_atoms = n_atoms;
  out.a = a;
  out.predicted_prefactor = 2.0 / (std::exp(a) + 1.0);
  out.branch = branch;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    ResiduePoint probe = probe_amplitude(p, mid, n_max);
    if (!probe.has_fbs)
      throw NumericalError(
          "design_optimal_a: bound state vanished inside the bracket");
    const double f_mid = probe.z2 - target;
    if (std::abs(f_mid) <= tol) {
      out.a_opt = mid;
      out.z2 = probe.z2;
      out.y_value = y_n(probe.z2, n_atoms);
      return out;
    }
    if ((f_lo <= 0.0) == (f_mid <= 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw NumericalError(
      "design_optimal_a: bisection failed to reach |Z^2 - target| <= tol");
}

} // namespace

std::vector<DesignResult> design_sweep(const ModelParams& p,
                                       std::span<const int> n_values,
                                       double a, double tol, int branch,
                                       int n_max, double curve_step,
                                       int workers) {
  p.validate();
  if (!(a > 0.0)) throw ConfigError("design_sweep: a must be > 0");
  if (!(tol > 0.0)) throw ConfigError("design_sweep: tol must be > 0");
  if (!(curve_step > 0.0))
    throw ConfigError("design_sweep: curve_step must be > 0");
  if (branch < 0) throw ConfigError("design_sweep: branch must be >= 0");
  for (int n : n_values)
    if (n < 1) throw ConfigError("design_sweep: every N must be >= 1");

  std::vector<Interval> regions =
      fbs_regions(p, 0.0, kRegionSpan * p.drive_frequency, 0.2,
                  std::min(curve_step, 0.05), n_max, workers);
  if (branch >= static_cast<int>(regions.size()))
    throw ConfigError("design_sweep: branch " + std::to_string(branch) +
                      " out of range, found " +
                      std::to_string(regions.size()) +
                      " amplitude region(s)");
  const Interval region = regions[branch];

  std::vector<double> amplitudes;
  for (double x = region.lo; x < region.hi; x += curve_step)
    amplitudes.push_back(x);
  amplitudes.push_back(region.hi);
  std::vector<ResiduePoint> curve = residue_curve(p, amplitudes, n_max,
                                                  workers);

  std::vector<DesignResult> out;
  out.reserve(n_values.size());
  for (int n : n_values)
    out.push_back(invert_on_curve(p, curve, n, a, tol, branch, n_max));
  return out;
}

DesignResult design_optimal_a(const ModelParams& p, int n_atoms, double a,
                              double tol, int branch, int n_max,
                              double curve_step, int workers) {
  const int ns[] = {n_atoms};
  return design_sweep(p, ns, a, tol, branch, n_max, curve_step, workers)[0];
}

} // namespace floqmet
