// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace floqmet {

/// Complete elliptic integral of the first kind in the squared-modulus
/// convention: K(x) = Int_0^{pi/2} [1 - x sin^2(phi)]^{-1/2} dphi, x < 1.
/// Evaluated by the arithmetic-geometric mean; relative accuracy better
/// than 1e-10 over the domain (1e-14 away from the x -> 1 divergence).
double elliptic_k(double x);

/// Complete elliptic integral of the second kind, same convention:
/// E(x) = Int_0^{pi/2} [1 - x sin^2(phi)]^{1/2} dphi, x <= 1, with E(1) = 1.
double elliptic_e(double x);

/// Principal branch of the Lambert W function, W(z) e^{W(z)} = z, for
/// z >= -1/e.  Halley iteration; residual |W e^W - z| < 1e-12 (1 + |z|).
double lambert_w(double z);

/// Bessel function of the first kind, order zero.
double bessel_j0(double x);

} // namespace floqmet
