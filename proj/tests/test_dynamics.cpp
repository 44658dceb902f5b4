// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "floqmet/dynamics.hpp"
#include "floqmet/errors.hpp"
#include "floqmet/model.hpp"
#include "floqmet/special_functions.hpp"

using floqmet::AmplitudeTrajectory;
using floqmet::lattice_oracle;
using floqmet::markovian_amplitude;
using floqmet::markovian_params;
using floqmet::ModelParams;
using floqmet::solve_amplitude;
using cd = std::complex<double>;

namespace {

// Largest pointwise | |c_a| - |c_b| | over the common part of two
// trajectories sampled on grids whose steps differ by `ratio`.
double worst_mag_diff(const AmplitudeTrajectory& a,
                      const AmplitudeTrajectory& b, int ratio = 1) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.c.size() && i * ratio < b.c.size(); ++i)
    worst = std::max(worst,
                     std::abs(std::abs(a.c[i]) - std::abs(b.c[i * ratio])));
  return worst;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("decoupled emitter accumulates the exact drive phase") {
  ModelParams p;
  p.g = 0.0;
  p.drive_amplitude = 11.0;
  auto traj = solve_amplitude(p, 3.0, 0.01, true);
  for (std::size_t i = 0; i < traj.times.size(); i += 25) {
    const double t = traj.times[i];
    const double theta = p.omega0 * t + floqmet::drive_phase(t, p);
    CHECK(std::abs(traj.c[i] - std::exp(cd(0.0, -theta))) < 1e-12);
    // Sensitivity of e^{-i omega0 t} is -i t c.
    CHECK(std::abs(traj.dc_domega0[i] - (-cd(0.0, 1.0) * t * traj.c[i])) <
          1e-10);
  }
}

TEST_CASE("initial conditions") {
  ModelParams p;
  auto traj = solve_amplitude(p, 1.0, 0.01, false);
  CHECK(traj.c.front() == cd(1.0, 0.0));
  CHECK(traj.dc_domega0.front() == cd(0.0, 0.0));
  CHECK(traj.lattice_norm_drift == 0.0);
}

TEST_CASE("preconditions are enforced") {
  ModelParams p;
  CHECK_THROWS_AS(solve_amplitude(p, -1.0, 0.01, false), floqmet::ConfigError);
  CHECK_THROWS_AS(solve_amplitude(p, 1.0, 0.0, false), floqmet::ConfigError);
  ModelParams stiff = p;
  stiff.hopping = 2.0;  // dt must now be <= 0.025
  CHECK_THROWS_AS(solve_amplitude(stiff, 1.0, 0.04, false),
                  floqmet::ConfigError);
  // T/40 ~ 0.0131: dt = 0.02 resolves the band but not the drive.
  CHECK_THROWS_AS(solve_amplitude(p, 1.0, 0.02, true), floqmet::ConfigError);
  CHECK_NOTHROW(solve_amplitude(p, 1.0, 0.02, false));
}

TEST_CASE("the grid is commensurate with the drive period") {
  ModelParams p;
  auto traj = solve_amplitude(p, 5.0, 0.013, true);
  const double T = p.period();
  CHECK(traj.dt * traj.steps_per_period == doctest::Approx(T).epsilon(1e-13));
  CHECK(traj.dt <= 0.013 * (1.0 + 1e-12));
  for (int n : {1, 3, 7}) {
    CAPTURE(n);
    CHECK(traj.times[traj.period_index(n)] ==
          doctest::Approx(n * T).epsilon(1e-12));
  }
  CHECK_THROWS_AS(traj.period_index(1000), floqmet::ConfigError);
  CHECK_THROWS_AS(traj.period_index(-1), floqmet::ConfigError);
}

TEST_CASE("dt-halving shows second-order convergence") {
  ModelParams p;  // strong coupling, worst case for the history quadrature
  const double T = p.period();
  std::vector<AmplitudeTrajectory> runs;
  for (int div : {32, 64, 128, 256})
    runs.push_back(solve_amplitude(p, 5.0, T / div, false));
  double diffs[3];
  for (int k = 0; k < 3; ++k) {
    double worst = 0.0;
    const auto& coarse = runs[k].c;
    const auto& fine = runs[k + 1].c;
    for (std::size_t i = 0; i < coarse.size() && 2 * i < fine.size(); ++i)
      worst = std::max(worst, std::abs(coarse[i] - fine[2 * i]));
    diffs[k] = worst;
  }
  const double order1 = std::log2(diffs[0] / diffs[1]);
  const double order2 = std::log2(diffs[1] / diffs[2]);
  CHECK(order1 == doctest::Approx(2.0).epsilon(0.1));
  CHECK(order2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("weak coupling reproduces the Markovian decay law") {
  ModelParams p;
  p.g = 0.1;
  const auto m = markovian_params(p);
  CHECK(m.kappa ==
        doctest::Approx(std::numbers::pi *
                        floqmet::spectral_density(p.omega0, p))
            .epsilon(1e-13));
  const double t_end = 1.0 / m.kappa;  // ~224/h
  auto traj = solve_amplitude(p, t_end, 0.05, false);
  for (std::size_t i = 0; i < traj.times.size(); i += 100) {
    const double t = traj.times[i];
    CAPTURE(t);
    CHECK(std::abs(traj.c[i]) ==
          doctest::Approx(std::exp(-m.kappa * t)).epsilon(5e-3));
  }
  // The accumulated phase tracks the Lamb-shifted frequency.  Rotate by
  // the actual final grid time: dt is snapped, so times.back() != t_end.
  const cd rot = traj.c.back() *
                 std::exp(cd(0.0, (p.omega0 + m.delta) * traj.times.back()));
  CHECK(std::abs(std::arg(rot)) < 0.01);
}

TEST_CASE("sensitivity channel agrees with finite differences") {
  ModelParams p;
  p.drive_amplitude = 11.0;
  auto traj = solve_amplitude(p, 10.0, 0.01, true);
  const double d = 1e-4;
  ModelParams up = p, dn = p;
  up.omega0 += d;
  dn.omega0 -= d;
  auto tu = solve_amplitude(up, 10.0, 0.01, true);
  auto td = solve_amplitude(dn, 10.0, 0.01, true);
  const cd fd = (tu.c.back() - td.c.back()) / (2.0 * d);
  const cd an = traj.dc_domega0.back();
  CHECK(std::abs(an - fd) / std::abs(fd) < 1e-5);
}

TEST_CASE("lattice oracle confirms the memory-kernel solution, undriven") {
  ModelParams p;
  auto solve = solve_amplitude(p, 15.0, 0.01, false);
  auto lattice = lattice_oracle(p, 96, 15.0, 0.01, false);
  CHECK(worst_mag_diff(solve, lattice) < 2e-4);
  CHECK(lattice.lattice_norm_drift < 1e-8);
  CHECK(lattice.lattice_norm_drift > 0.0);  // the diagnostic is recorded
}

TEST_CASE("lattice oracle confirms the memory-kernel solution, driven") {
  ModelParams p;
  p.drive_amplitude = 11.0;
  auto solve = solve_amplitude(p, 10.0, 0.01, true);
  auto lattice = lattice_oracle(p, 96, 10.0, 0.01, true);
  CHECK(worst_mag_diff(solve, lattice) < 2e-4);
  CHECK(lattice.lattice_norm_drift < 1e-8);
}

TEST_CASE("lattice oracle rejects undersized or odd grids") {
  ModelParams p;
  CHECK_THROWS_AS(lattice_oracle(p, 30, 1.0, 0.01, false),
                  floqmet::ConfigError);
  CHECK_THROWS_AS(lattice_oracle(p, 33, 1.0, 0.01, false),
                  floqmet::ConfigError);
}

TEST_CASE("markovian reduction: frozen Lamb shift and closed form") {
  ModelParams p;
  auto m = markovian_params(p);
  CHECK(m.kappa == doctest::Approx(0.445825794993561).epsilon(1e-12));
  CHECK(m.delta == doctest::Approx(0.254040041348121).epsilon(1e-10));
  // Inside the band the principal value has the closed form
  // g^2 K[((omega0 - omega_c)/4h)^2] / (2 pi h); the symmetric-excision
  // quadrature carries a first-order excision error ~ 2 |J'| excision.
  const double closed = floqmet::elliptic_k(1.0 / 16.0) /
                        (2.0 * std::numbers::pi);
  CHECK(std::abs(m.delta - closed) < 2e-5);
  auto finer = markovian_params(p, 5e-5);
  CHECK(std::abs(finer.delta - closed) < std::abs(m.delta - closed));
}

TEST_CASE("markovian reduction outside the band has no decay") {
  ModelParams p;
  p.omega0 = 5.0;
  auto m = markovian_params(p);
  CHECK(m.kappa == 0.0);
  CHECK(std::isfinite(m.delta));
  // Out there the shift is the plain integral, i.e. the self-energy.
  CHECK(m.delta != 0.0);
}

TEST_CASE("markovian amplitude is the explicit exponential") {
  floqmet::MarkovianModel m;
  m.kappa = 0.3;
  m.delta = 0.05;
  const double w0 = 1.2, t = 2.5;
  const cd c = markovian_amplitude(m, w0, t);
  CHECK(std::abs(c) == doctest::Approx(std::exp(-m.kappa * t)).epsilon(1e-14));
  CHECK(std::arg(c * std::exp(cd(0.0, (w0 + m.delta) * t))) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

}  // TEST_SUITE
