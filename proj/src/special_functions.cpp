// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include "floqmet/special_functions.hpp"

#include <cmath>
#include <limits>

#include "floqmet/errors.hpp"

namespace floqmet {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kInvE = 0.36787944117144232159552377016146087;
} // namespace

// Arithmetic-geometric mean.  K(x) = pi / (2 AGM(1, sqrt(1-x))); the
// companion sum over the Landen differences c_n gives E(x) at no extra
// cost:  E = K (1 - sum_n 2^{n-1} c_n^2) with c_0^2 = x.
static void elliptic_ke(double x, double* k_out, double* e_out) {
  if (!(x < 1.0)) {
    throw DomainError("elliptic integral: modulus^2 must be < 1, got " +
                      std::to_string(x));
  }
  double a = 1.0;
  double b = std::sqrt(1.0 - x);
  double c2_sum = 0.5 * x; // 2^{-1} c_0^2
  double pow2 = 0.5;
  for (int i = 0; i < 64; ++i) {
    double c = 0.5 * (a - b);
    double an = 0.5 * (a + b);
    double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    pow2 *= 2.0;
    c2_sum += pow2 * c * c;
    if (std::abs(c) <= 0.5 * std::numeric_limits<double>::epsilon() * a) break;
  }
  double k = kPi / (2.0 * a);
  if (k_out != nullptr) *k_out = k;
  if (e_out != nullptr) *e_out = k * (1.0 - c2_sum);
}

double elliptic_k(double x) {
  double k;
  elliptic_ke(x, &k, nullptr);
  return k;
}

double elliptic_e(double x) {
  if (x == 1.0) return 1.0;
  double e;
  elliptic_ke(x, nullptr, &e);
  return e;
}

double lambert_w(double z) {
  if (std::isnan(z) || z < -kInvE) {
    throw DomainError("lambert_w: principal branch needs z >= -1/e, got " +
                      std::to_string(z));
  }
  if (z == 0.0) return 0.0;

  // Initial guess: series near the branch point, log asymptote for large z,
  // z(1 - z) otherwise.
  double w;
  if (z < -0.25) {
    double p = std::sqrt(2.0 * (1.0 + z / kInvE));
    w = -1.0 + p - p * p / 3.0;
  } else if (z < 2.0) {
    w = z * (1.0 - z);
    if (w < -0.9) w = -0.9;
  } else {
    double l1 = std::log(z);
    double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  // Halley iteration on f(w) = w e^w - z.
  for (int i = 0; i < 100; ++i) {
    double ew = std::exp(w);
    double f = w * ew - z;
    if (f == 0.0) break;
    double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    if (denom == 0.0) break;
    double dw = f / denom;
    w -= dw;
    if (std::abs(dw) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  if (std::abs(w * std::exp(w) - z) > 1e-12 * (1.0 + std::abs(z))) {
    throw NumericalError("lambert_w: iteration did not converge for z = " +
                         std::to_string(z));
  }
  return w;
}

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

} // namespace floqmet
