// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include "floqmet/floquet.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "floqmet/errors.hpp"
#include "floqmet/parallel.hpp"
#include "floqmet/special_functions.hpp"

namespace floqmet {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Resolution of the root scan over each spectral gap, in units of h.
constexpr double kScanStep = 1e-3;
// Bound states closer to a band edge than this (in units of h) are treated
// as absent; the self-energy diverges logarithmically there and the pole
// carries vanishing residue.
constexpr double kEdgeMargin = 1e-4;
// Root acceptance: |chi| at the converged bisection point, in units of h.
constexpr double kRootResidual = 1e-9;

} // namespace

double self_energy(double epsilon, int copy_index, const ModelParams& p) {
  const double e = epsilon - copy_index * p.drive_frequency - p.omega_c;
  const double half_width = 4.0 * p.hopping;
  if (std::abs(e) <= half_width)
    throw DomainError("self_energy: detuning lies inside the band copy");
  const double x = (half_width / e) * (half_width / e);
  return 2.0 * p.g * p.g * elliptic_k(x) / (kPi * e);
}

double self_energy_slope(double epsilon, int copy_index,
                         const ModelParams& p) {
  const double e = epsilon - copy_index * p.drive_frequency - p.omega_c;
  const double half_width = 4.0 * p.hopping;
  if (std::abs(e) <= half_width)
    throw DomainError("self_energy_slope: detuning lies inside the band copy");
  const double x = (half_width / e) * (half_width / e);
  return -2.0 * p.g * p.g * elliptic_e(x) /
         (kPi * (e * e - half_width * half_width));
}

TridiagonalMatrix floquet_matrix(double epsilon, const ModelParams& p,
                                 int n_max) {
  if (n_max < 0) throw ConfigError("floquet_matrix: n_max must be >= 0");
  const int dim = 2 * n_max + 1;
  TridiagonalMatrix y;
  y.diag.resize(dim);
  y.off.assign(dim > 1 ? dim - 1 : 0, -0.25 * p.drive_amplitude);
  for (int i = 0; i < dim; ++i) {
    const int m = i - n_max;
    y.diag[i] = p.omega0 + 0.5 * p.drive_amplitude + m * p.drive_frequency +
                self_energy(epsilon, m, p);
  }
  return y;
}

std::vector<BandCopy> band_copies_in(const ModelParams& p, double lo,
                                     double hi) {
  const double w = 4.0 * p.hopping;
  std::vector<BandCopy> copies;
  const int m_lo = static_cast<int>(
      std::ceil((lo - p.omega_c - w) / p.drive_frequency - 1.0));
  const int m_hi = static_cast<int>(
      std::floor((hi - p.omega_c + w) / p.drive_frequency + 1.0));
  for (int m = m_lo; m <= m_hi; ++m) {
    const double center = p.omega_c + m * p.drive_frequency;
    if (center + w < lo || center - w > hi) continue;
    copies.push_back({m, center - w, center + w});
  }
  return copies;
}

std::vector<Interval> gap_segments(const ModelParams& p, double lo, double hi,
                                   double edge_margin) {
  // Merge the band copies overlapping [lo, hi], then take the complement,
  // pulling each segment end adjacent to a band edge inward by the margin.
  std::vector<BandCopy> copies = band_copies_in(p, lo, hi);
  std::vector<std::pair<double, double>> merged;
  for (const BandCopy& c : copies) {
    if (!merged.empty() && c.lo <= merged.back().second)
      merged.back().second = std::max(merged.back().second, c.hi);
    else
      merged.emplace_back(c.lo, c.hi);
  }
  std::vector<Interval> gaps;
  double cursor = lo;
  bool cursor_at_edge = false;
  for (const auto& band : merged) {
    if (band.first > cursor) {
      double a = cursor + (cursor_at_edge ? edge_margin : 0.0);
      double b = band.first - edge_margin;
      if (b > a) gaps.push_back({a, b});
    }
    cursor = std::max(cursor, band.second);
    cursor_at_edge = true;
  }
  if (cursor < hi) {
    double a = cursor + (cursor_at_edge ? edge_margin : 0.0);
    if (hi > a) gaps.push_back({a, hi});
  }
  return gaps;
}

int default_n_max(const ModelParams& p) {
  // Sideband weights fall off like Bessel functions of order beyond
  // A / (2 omega_T); a fixed margin covers the evanescent tail.
  const double z = 0.5 * p.drive_amplitude / p.drive_frequency;
  return std::max(8, static_cast<int>(std::ceil(z)) + 12);
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal matrix strictly less
// than x, by the Sturm sequence of the shifted LDL^T pivots.
int sturm_count(const TridiagonalMatrix& t, double x) {
  const int dim = static_cast<int>(t.diag.size());
  int count = 0;
  double q = t.diag[0] - x;
  if (q < 0.0) ++count;
  for (int i = 1; i < dim; ++i) {
    const double off = t.off[i - 1];
    if (q == 0.0) q = 1e-300;
    q = t.diag[i] - x - off * off / q;
    if (q < 0.0) ++count;
  }
  return count;
}

// k-th eigenvalue (ascending, 0-based) by Sturm bisection.
double sturm_eigenvalue(const TridiagonalMatrix& t, int k) {
  const int dim = static_cast<int>(t.diag.size());
  double lo = t.diag[0], hi = t.diag[0];
  for (int i = 0; i < dim; ++i) {
    const double left = i > 0 ? std::abs(t.off[i - 1]) : 0.0;
    const double right = i + 1 < dim ? std::abs(t.off[i]) : 0.0;
    lo = std::min(lo, t.diag[i] - left - right);
    hi = std::max(hi, t.diag[i] + left + right);
  }
  const double tol =
      1e-14 * std::max({std::abs(lo), std::abs(hi), 1.0});
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(t, mid) <= k)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Eigenvalue of Y(epsilon) nearest to epsilon.
double nearest_eigenvalue(const TridiagonalMatrix& t, double x) {
  const int dim = static_cast<int>(t.diag.size());
  const int below = sturm_count(t, x);
  if (below == 0) return sturm_eigenvalue(t, 0);
  if (below == dim) return sturm_eigenvalue(t, dim - 1);
  const double lower = sturm_eigenvalue(t, below - 1);
  const double upper = sturm_eigenvalue(t, below);
  return (x - lower <= upper - x) ? lower : upper;
}

double chi(double epsilon, const ModelParams& p, int n_max) {
  TridiagonalMatrix t = floquet_matrix(epsilon, p, n_max);
  return nearest_eigenvalue(t, epsilon) - epsilon;
}

// Assemble the bound state at a converged root: dense eigenvector of the
// tridiagonal pencil, normalized against the frequency-dependent metric
// G = 1 - dSigma/depsilon.
FloquetBoundState assemble_state(double root, const ModelParams& p,
                                 int n_max) {
  const int dim = 2 * n_max + 1;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(dim, dim);
  TridiagonalMatrix t = floquet_matrix(root, p, n_max);
  for (int i = 0; i < dim; ++i) y(i, i) = t.diag[i];
  for (int i = 0; i + 1 < dim; ++i) {
    y(i, i + 1) = t.off[i];
    y(i + 1, i) = t.off[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y);
  if (es.info() != Eigen::Success)
    throw NumericalError("solve_fbs: eigendecomposition failed");
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i) {
    const double dist = std::abs(es.eigenvalues()(i) - root);
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  Eigen::VectorXd v = es.eigenvectors().col(best);

  double norm2 = 0.0;
  double sum = 0.0;
  for (int i = 0; i < dim; ++i) {
    const int m = i - n_max;
    const double metric = 1.0 - self_energy_slope(root, m, p);
    norm2 += metric * v(i) * v(i);
    sum += v(i);
  }
  if (!(norm2 > 0.0))
    throw NumericalError("solve_fbs: non-positive normalization metric");
  const double scale = 1.0 / std::sqrt(norm2);

  FloquetBoundState state;
  state.epsilon_b = root;
  state.n_max = n_max;
  state.coeffs.resize(dim);
  for (int i = 0; i < dim; ++i) state.coeffs[i] = v(i) * scale;
  state.residue = (sum * scale) * (sum * scale);
  return state;
}

// Locate every root of chi inside one gap segment.  chi decreases strictly
// through a root (dSigma/depsilon < 0 implies slope <= -1) and jumps upward
// where the nearest eigenvalue switches branch, so roots are downward sign
// changes; the residual test rejects converged jump points.
void scan_segment(const Interval& seg, const ModelParams& p, int n_max,
                  std::vector<double>& roots) {
  const double step = kScanStep * p.hopping;
  const int n_cells = std::max(1, static_cast<int>(std::ceil(
                                      (seg.hi - seg.lo) / step)));
  const double accept = kRootResidual * p.hopping;

  double prev_x = seg.lo;
  double prev_chi = chi(prev_x, p, n_max);
  for (int i = 1; i <= n_cells; ++i) {
    const double x = seg.lo + (seg.hi - seg.lo) * i / n_cells;
    const double value = chi(x, p, n_max);
    if ((prev_chi > 0.0 && value <= 0.0) ||
        (prev_chi == 0.0 && value < 0.0)) {
      double a = prev_x, b = x;
      double fa = prev_chi;
      for (int iter = 0; iter < 80 && b - a > 1e-13 * std::max(1.0, std::abs(b));
           ++iter) {
        const double mid = 0.5 * (a + b);
        const double fm = chi(mid, p, n_max);
        if ((fa > 0.0 && fm > 0.0) || (fa <= 0.0 && fm <= 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      const double root = 0.5 * (a + b);
      if (std::abs(chi(root, p, n_max)) < accept) roots.push_back(root);
    }
    prev_x = x;
    prev_chi = value;
  }
}

} // namespace

std::vector<FloquetBoundState> solve_fbs_in(const ModelParams& p, int n_max,
                                            double lo, double hi) {
  p.validate();
  if (!(lo < hi)) throw ConfigError("solve_fbs_in: need lo < hi");
  if (n_max <= 0) n_max = default_n_max(p);

  std::vector<double> roots;
  for (const Interval& seg :
       gap_segments(p, lo, hi, kEdgeMargin * p.hopping))
    scan_segment(seg, p, n_max, roots);

  std::sort(roots.begin(), roots.end());
  std::vector<FloquetBoundState> states;
  for (double root : roots) {
    if (!states.empty() &&
        root - states.back().epsilon_b < 1e-9 * p.hopping)
      continue;
    states.push_back(assemble_state(root, p, n_max));
  }
  return states;
}

std::vector<FloquetBoundState> solve_fbs(const ModelParams& p, int n_max) {
  const double half = 0.5 * p.drive_frequency;
  return solve_fbs_in(p, n_max, -half, half);
}

FloquetBoundState fbs_derivatives(const ModelParams& p, int n_max,
                                  double delta, int branch) {
  p.validate();
  if (!(delta > 0.0)) throw ConfigError("fbs_derivatives: delta must be > 0");
  if (n_max <= 0) n_max = default_n_max(p);

  std::vector<FloquetBoundState> base = solve_fbs(p, n_max);
  if (branch < 0 || branch >= static_cast<int>(base.size()))
    throw ConfigError("fbs_derivatives: branch index out of range, found " +
                      std::to_string(base.size()) + " bound state(s)");
  FloquetBoundState state = base[branch];

  // The root moves by at most ~|shift| (|depsilon/domega0| <= 1), so a
  // small bracket around the base root re-solved in a window keeps each
  // probe cheap and pinned to the same branch.
  auto probe = [&](double shift) -> FloquetBoundState {
    ModelParams q = p;
    q.omega0 += shift;
    const double r = std::max(4.0 * std::abs(shift), 1e-10 * p.hopping);
    std::vector<FloquetBoundState> found =
        solve_fbs_in(q, n_max, state.epsilon_b - r, state.epsilon_b + r);
    if (found.empty())
      throw NumericalError(
          "fbs_derivatives: bound state lost while shifting omega0");
    // Nearest root to the base one.
    std::size_t best = 0;
    for (std::size_t i = 1; i < found.size(); ++i)
      if (std::abs(found[i].epsilon_b - state.epsilon_b) <
          std::abs(found[best].epsilon_b - state.epsilon_b))
        best = i;
    return found[best];
  };

  auto central = [&](double d, double& deps, double& dz2) {
    FloquetBoundState plus = probe(d);
    FloquetBoundState minus = probe(-d);
    deps = (plus.epsilon_b - minus.epsilon_b) / (2.0 * d);
    dz2 = (plus.residue * plus.residue - minus.residue * minus.residue) /
          (2.0 * d);
  };

  double deps_c, dz2_c, deps_f, dz2_f;
  central(delta, deps_c, dz2_c);
  central(0.5 * delta, deps_f, dz2_f);
  const double tol_eps = 1e-4 * std::max(std::abs(deps_f), 1e-6);
  const double tol_z2 = 1e-4 * std::max(std::abs(dz2_f), 1e-6);
  if (std::abs(deps_c - deps_f) > tol_eps ||
      std::abs(dz2_c - dz2_f) > tol_z2)
    throw NumericalError(
        "fbs_derivatives: step-halving inconsistency in the sensitivities");

  state.d_epsilon_domega0 = deps_f;
  state.d_z2_domega0 = dz2_f;
  return state;
}

SpectrumScan scan_spectrum(const ModelParams& p, ScanAxis axis,
                           std::span<const double> values, int n_max,
                           int workers) {
  p.validate();
  SpectrumScan scan;
  scan.axis = axis;
  scan.values.assign(values.begin(), values.end());
  scan.branches.resize(values.size());
  scan.band_edges.resize(values.size());

  parallel_for(values.size(), workers, [&](std::size_t i) {
    ModelParams q = p;
    if (axis == ScanAxis::amplitude)
      q.drive_amplitude = values[i];
    else
      q.drive_frequency = values[i];
    q.validate();
    const double half = 0.5 * q.drive_frequency;
    scan.branches[i] = solve_fbs(q, n_max);
    scan.band_edges[i] = band_copies_in(q, -half, half);
  });
  return scan;
}

} // namespace floqmet
