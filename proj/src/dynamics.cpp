// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include "floqmet/dynamics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "floqmet/errors.hpp"
#include "floqmet/model.hpp"

namespace floqmet {

using cd = std::complex<double>;
namespace {
constexpr cd kI{0.0, 1.0};
}

std::size_t AmplitudeTrajectory::period_index(int n) const {
  if (n < 0 || steps_per_period <= 0)
    throw ConfigError("period_index: invalid stroboscopic index");
  std::size_t i = static_cast<std::size_t>(n) *
                  static_cast<std::size_t>(steps_per_period);
  if (i >= times.size())
    throw ConfigError("period_index: " + std::to_string(n) +
                      " periods exceed the stored trajectory");
  return i;
}

// Snap dt to the nearest divisor of the drive period from below, so that
// stroboscopic times land exactly on the grid.
static int snap_to_period(const ModelParams& p, double& dt) {
  double period = p.period();
  int m = static_cast<int>(std::ceil(period / dt - 1e-12));
  if (m < 1) m = 1;
  dt = period / m;
  return m;
}

AmplitudeTrajectory solve_amplitude(const ModelParams& p, double t_max,
                                    double dt, bool driven) {
  p.validate();
  if (!(t_max > 0.0)) throw ConfigError("solve_amplitude: t_max must be > 0");
  if (!(dt > 0.0)) throw ConfigError("solve_amplitude: dt must be > 0");
  if (dt > 0.05 / p.hopping * (1.0 + 1e-12))
    throw ConfigError("solve_amplitude: dt must resolve the band, dt <= 0.05/h");
  if (driven && dt > p.period() / 40.0 * (1.0 + 1e-12))
    throw ConfigError("solve_amplitude: dt must resolve the drive, dt <= T/40");

  int steps_per_period = snap_to_period(p, dt);
  std::size_t n = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  if (n < 1) n = 1;

  // Interaction picture: c(t) = e^{-i theta(t)} u(t) with
  // theta = omega0 t + Int_0^t f.  The memory kernel becomes
  //   du/dt = -e^{+i theta(t)} Int_0^t nu(t-s) e^{-i theta(s)} u(s) ds
  // and the sensitivity w = du/domega0 obeys the same equation with the
  // source shifted by i (t - s) u(s).  The free phase is then exact and
  // the trapezoidal history quadrature only sees the kernel oscillations.
  std::vector<cd> nu(n + 1), phase(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double t = static_cast<double>(i) * dt;
    nu[i] = correlation_function(t, p);
    double theta = p.omega0 * t + (driven ? drive_phase(t, p) : 0.0);
    phase[i] = std::exp(-kI * theta);
  }

  // q = e^{-i theta} u, r = e^{-i theta} w, s = t q.  These are also the
  // outputs: c = q and dc/domega0 = r - i t q.
  std::vector<cd> q(n + 1), r(n + 1), s(n + 1);
  q[0] = 1.0;
  r[0] = 0.0;
  s[0] = 0.0;

  cd u = 1.0, w = 0.0;   // picture amplitudes at the current step
  cd fu = 0.0, fw = 0.0; // du/dt, dw/dt at the current step
  const cd nu0 = nu[0];

  for (std::size_t i = 0; i < n; ++i) {
    double t1 = static_cast<double>(i + 1) * dt;
    const cd ephase = 1.0 / phase[i + 1]; // e^{+i theta(t_{i+1})}

    // Trapezoidal history over [0, t_{i+1}] excluding the new endpoint:
    // half weight at j = 0, full weight at j = 1..i.
    cd hist_q = 0.5 * nu[i + 1] * q[0];
    cd hist_r{0.0, 0.0};
    cd hist_s{0.0, 0.0};
    const cd* nurev = nu.data() + (i + 1);
    for (std::size_t j = 1; j <= i; ++j) {
      const cd k = nurev[-static_cast<std::ptrdiff_t>(j)];
      hist_q += k * q[j];
      hist_r += k * r[j];
      hist_s += k * s[j];
    }

    auto derivative = [&](cd q_end, cd r_end, cd s_end, cd* du,
                          cd* dw) {
      cd iq = dt * (hist_q + 0.5 * nu0 * q_end);
      cd ir = dt * (hist_r + 0.5 * nu0 * r_end);
      cd is = dt * (hist_s + 0.5 * nu0 * s_end);
      *du = -ephase * iq;
      *dw = -ephase * (ir + kI * (t1 * iq - is));
    };

    // Explicit (Euler) predictor.
    cd up = u + dt * fu;
    cd wp = w + dt * fw;
    cd fu_p, fw_p;
    derivative(phase[i + 1] * up, phase[i + 1] * wp, t1 * phase[i + 1] * up,
               &fu_p, &fw_p);

    // Trapezoidal corrector, then refresh the end-point derivative for the
    // next predictor.
    u += 0.5 * dt * (fu + fu_p);
    w += 0.5 * dt * (fw + fw_p);
    q[i + 1] = phase[i + 1] * u;
    r[i + 1] = phase[i + 1] * w;
    s[i + 1] = t1 * q[i + 1];
    derivative(q[i + 1], r[i + 1], s[i + 1], &fu, &fw);

    double mag = std::abs(u);
    if (!(mag <= 1.0 + 1e-3))
      throw NumericalError(
          "solve_amplitude: |c| = " + std::to_string(mag) + " at t = " +
          std::to_string(t1) + "; integration unstable (reduce dt)");
  }

  AmplitudeTrajectory out;
  out.params = p;
  out.driven = driven;
  out.dt = dt;
  out.steps_per_period = steps_per_period;
  out.times.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    out.times[i] = static_cast<double>(i) * dt;
  out.c = std::move(q);
  out.dc_domega0.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    out.dc_domega0[i] = r[i] - kI * out.times[i] * out.c[i];
  return out;
}

AmplitudeTrajectory lattice_oracle(const ModelParams& p, int lattice_size,
                                   double t_max, double dt, bool driven,
                                   double internal_dt) {
  p.validate();
  if (lattice_size < 32 || lattice_size % 2 != 0)
    throw ConfigError("lattice_oracle: lattice size must be even and >= 32");
  if (!(t_max > 0.0) || !(dt > 0.0))
    throw ConfigError("lattice_oracle: t_max and dt must be > 0");

  const int L = lattice_size;
  const std::size_t modes = static_cast<std::size_t>(L) * L;
  int steps_per_period = snap_to_period(p, dt);
  std::size_t n_rec = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  if (n_rec < 1) n_rec = 1;

  double omega_scale = std::max({std::abs(p.band_lo()), std::abs(p.band_hi()),
                                 p.omega0 + p.drive_amplitude}) +
                       1.0;
  if (internal_dt <= 0.0) internal_dt = 0.02 / omega_scale;
  int substeps = std::max(1, static_cast<int>(std::ceil(dt / internal_dt)));
  double h_step = dt / substeps;

  // Mode table of the L x L momentum grid; uniform coupling g/L.
  std::vector<double> omega_k(modes);
  {
    constexpr double two_pi = 2.0 * 3.141592653589793238462643383279502884;
    std::vector<double> c(L);
    for (int a = 0; a < L; ++a) c[a] = std::cos(two_pi * a / L);
    for (int ax = 0; ax < L; ++ax)
      for (int ay = 0; ay < L; ++ay)
        omega_k[static_cast<std::size_t>(ax) * L + ay] =
            p.omega_c - 2.0 * p.hopping * (c[ax] + c[ay]);
  }
  const double gk = p.g / L;

  // psi[0] = emitter amplitude, psi[1..] = mode amplitudes.
  std::vector<cd> psi(modes + 1, cd{0.0, 0.0});
  psi[0] = 1.0;

  auto rhs = [&](double t, const std::vector<cd>& y, std::vector<cd>& dy) {
    double eps_t = p.omega0 + (driven ? drive_field(t, p) : 0.0);
    cd sum{0.0, 0.0};
    const cd ce = y[0];
    for (std::size_t k = 0; k < modes; ++k) {
      const cd dk = y[k + 1];
      sum += dk;
      dy[k + 1] = -kI * (omega_k[k] * dk + gk * ce);
    }
    dy[0] = -kI * (eps_t * ce + gk * sum);
  };

  std::vector<cd> k1(modes + 1), k2(modes + 1), k3(modes + 1), k4(modes + 1),
      tmp(modes + 1);
  auto rk4_step = [&](double t) {
    rhs(t, psi, k1);
    for (std::size_t i = 0; i <= modes; ++i)
      tmp[i] = psi[i] + 0.5 * h_step * k1[i];
    rhs(t + 0.5 * h_step, tmp, k2);
    for (std::size_t i = 0; i <= modes; ++i)
      tmp[i] = psi[i] + 0.5 * h_step * k2[i];
    rhs(t + 0.5 * h_step, tmp, k3);
    for (std::size_t i = 0; i <= modes; ++i)
      tmp[i] = psi[i] + h_step * k3[i];
    rhs(t + h_step, tmp, k4);
    for (std::size_t i = 0; i <= modes; ++i)
      psi[i] += h_step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  AmplitudeTrajectory out;
  out.params = p;
  out.driven = driven;
  out.dt = dt;
  out.steps_per_period = steps_per_period;
  out.times.resize(n_rec + 1);
  out.c.resize(n_rec + 1);
  out.dc_domega0.assign(n_rec + 1, cd{0.0, 0.0});
  out.times[0] = 0.0;
  out.c[0] = psi[0];
  for (std::size_t rec = 1; rec <= n_rec; ++rec) {
    double t0 = static_cast<double>(rec - 1) * dt;
    for (int s = 0; s < substeps; ++s) rk4_step(t0 + s * h_step);
    out.times[rec] = static_cast<double>(rec) * dt;
    out.c[rec] = psi[0];
    double norm2 = 0.0;
    for (const cd& a : psi) norm2 += std::norm(a);
    out.lattice_norm_drift =
        std::max(out.lattice_norm_drift, std::abs(std::sqrt(norm2) - 1.0));
  }
  return out;
}

MarkovianModel markovian_params(const ModelParams& p, double excision) {
  p.validate();
  if (!(excision > 0.0))
    throw ConfigError("markovian_params: excision must be > 0");

  MarkovianModel m;
  constexpr double pi = 3.141592653589793238462643383279502884;
  m.kappa = pi * spectral_density(p.omega0, p);

  const double lo = p.band_lo();
  const double hi = p.band_hi();
  auto integrand = [&](double w) {
    return spectral_density(w, p) / (p.omega0 - w);
  };
  using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto piece = [&](double a, double b) {
    if (!(b > a)) return 0.0;
    return gk::integrate(integrand, a, b, 15, 1e-10);
  };

  // Principal value by symmetric excision around omega0 (when inside the
  // band); split additionally at the van Hove point.
  std::vector<double> cuts{lo, hi};
  bool excised = p.omega0 > lo && p.omega0 < hi;
  double ex_lo = p.omega0 - excision, ex_hi = p.omega0 + excision;
  if (excised) {
    cuts.push_back(std::max(lo, ex_lo));
    cuts.push_back(std::min(hi, ex_hi));
  }
  if (p.omega_c > lo && p.omega_c < hi) cuts.push_back(p.omega_c);
  std::sort(cuts.begin(), cuts.end());

  double delta = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    if (excised && a >= ex_lo - 1e-300 && b <= ex_hi + 1e-300) continue;
    delta += piece(a, b);
  }
  m.delta = delta;
  return m;
}

std::complex<double> markovian_amplitude(const MarkovianModel& m,
                                         double omega0, double t) {
  return std::exp(cd(-m.kappa * t, -(omega0 + m.delta) * t));
}

} // namespace floqmet
