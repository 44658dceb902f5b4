// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

// Test-side reference implementations, deliberately independent of the
// library: brute-force sums over finite lattices, direct quadrature of
// defining integrals, and naive long-double evaluations of closed forms.
// They are slow and simple on purpose so that agreement with the library
// is meaningful.

#ifndef FLOQMET_TESTS_ORACLES_HPP
#define FLOQMET_TESTS_ORACLES_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "floqmet/model.hpp"

namespace oracles {

/// K(m) by adaptive quadrature of the defining integral
/// (squared-modulus convention).
inline double elliptic_k_quad(double m) {
  boost::math::quadrature::gauss_kronrod<double, 61> integ;
  auto f = [m](double theta) {
    const double s = std::sin(theta);
    return 1.0 / std::sqrt(1.0 - m * s * s);
  };
  return integ.integrate(f, 0.0, std::numbers::pi / 2.0, 10);
}

/// E(m) by adaptive quadrature of the defining integral.
inline double elliptic_e_quad(double m) {
  boost::math::quadrature::gauss_kronrod<double, 61> integ;
  auto f = [m](double theta) {
    const double s = std::sin(theta);
    return std::sqrt(1.0 - m * s * s);
  };
  return integ.integrate(f, 0.0, std::numbers::pi / 2.0, 10);
}

/// Lambert W_0 by bisection on w e^w = x.  Valid for x >= 0.
inline double lambert_w_bisect(double x) {
  double lo = 0.0;
  double hi = std::max(1.0, std::log(x + 1.0) + 1.0);
  while (hi * std::exp(hi) < x) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Reservoir correlation function as a direct sum over an L x L momentum
/// grid: (g^2 / L^2) sum_k exp(-i w_k t).
inline std::complex<double> correlation_ksum(const floqmet::ModelParams& p,
                                             double t, int grid) {
  const double step = 2.0 * std::numbers::pi / grid;
  std::complex<double> acc(0.0, 0.0);
  for (int ix = 0; ix < grid; ++ix) {
    const double cx = std::cos(step * ix);
    for (int iy = 0; iy < grid; ++iy) {
      const double wk =
          p.omega_c - 2.0 * p.hopping * (cx + std::cos(step * iy));
      acc += std::exp(std::complex<double>(0.0, -wk * t));
    }
  }
  return acc * (p.g * p.g / double(grid) / double(grid));
}

/// Lattice self-energy as a direct sum: (g^2 / L^2) sum_k 1 / (E - w_k).
/// Only meaningful for E outside the band.
inline double self_energy_ksum(const floqmet::ModelParams& p, double energy,
                               int grid) {
  const double step = 2.0 * std::numbers::pi / grid;
  double acc = 0.0;
  for (int ix = 0; ix < grid; ++ix) {
    const double cx = std::cos(step * ix);
    for (int iy = 0; iy < grid; ++iy) {
      const double wk =
          p.omega_c - 2.0 * p.hopping * (cx + std::cos(step * iy));
      acc += 1.0 / (energy - wk);
    }
  }
  return acc * (p.g * p.g / double(grid) / double(grid));
}

/// Histogram of the lattice mode density, weighted so each bin approximates
/// the spectral density J(w) integrated over the bin.  Returns bin centers
/// and values of J averaged over each bin.
inline std::pair<std::vector<double>, std::vector<double>> dos_histogram(
    const floqmet::ModelParams& p, int grid, double bin_width) {
  const double lo = p.omega_c - 4.0 * p.hopping;
  const int n_bins = int(std::ceil(8.0 * p.hopping / bin_width));
  std::vector<double> centers(n_bins), values(n_bins, 0.0);
  for (int i = 0; i < n_bins; ++i) centers[i] = lo + (i + 0.5) * bin_width;
  const double step = 2.0 * std::numbers::pi / grid;
  const double weight =
      p.g * p.g / (double(grid) * grid * bin_width);
  for (int ix = 0; ix < grid; ++ix) {
    const double cx = std::cos(step * ix);
    for (int iy = 0; iy < grid; ++iy) {
      const double wk =
          p.omega_c - 2.0 * p.hopping * (cx + std::cos(step * iy));
      int bin = int((wk - lo) / bin_width);
      if (bin < 0) bin = 0;
      if (bin >= n_bins) bin = n_bins - 1;
      values[bin] += weight;
    }
  }
  return {std::move(centers), std::move(values)};
}

/// Population part of the entangled-probe QFI, summed term by term over the
/// diagonal eigenvalue ladder p^j (1-p)^(N-j) / 2 with binomial multiplicity,
/// j = 1 .. N-1.  Uses lgamma so large N stays finite.
inline double binomial_f2(double p, double dp, int n) {
  if (n < 2 || dp == 0.0) return 0.0;
  double acc = 0.0;
  for (int j = 1; j < n; ++j) {
    const double log_binom =
        std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
    const double lam = 0.5 * std::pow(p, j) * std::pow(1.0 - p, n - j);
    if (lam <= 0.0) continue;
    const double dlam =
        0.5 * dp *
        (j * std::pow(p, j - 1) * std::pow(1.0 - p, n - j) -
         (n - j) * std::pow(p, j) * std::pow(1.0 - p, n - j - 1));
    acc += std::exp(log_binom) * dlam * dlam / lam;
  }
  return acc;
}

/// Markovian QFI in its literal closed form, evaluated in long double.
/// Overflows for large N * kappa * t; use only in its comfortable range.
inline double markovian_literal(double kappa, double t, int n) {
  const long double a = std::exp(2.0L * kappa * t) - 1.0L;
  const long double denom =
      1.0L + std::pow(a, (long double)n) + std::exp(2.0L * n * kappa * t);
  return double(2.0L * n * n * t * t / denom);
}

/// Golden-section maximizer of a unimodal function on [lo, hi].
/// Returns {argmax, max}.
inline std::pair<double, double> golden_max(
    const std::function<double(double)>& f, double lo, double hi,
    double tol = 1e-10) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

/// Least-squares slope of log(y) against log(x).  Points with
/// non-positive coordinates are skipped.
inline double loglog_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles

#endif  // FLOQMET_TESTS_ORACLES_HPP
