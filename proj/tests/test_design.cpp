// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "floqmet/asymptotics.hpp"
#include "floqmet/design.hpp"
#include "floqmet/errors.hpp"
#include "floqmet/floquet.hpp"
#include "floqmet/model.hpp"

using namespace floqmet;

TEST_SUITE("design") {

TEST_CASE("residue curve: frozen anchors along the first two regions") {
  ModelParams p;
  const std::vector<double> amplitudes = {3.0, 5.0,  6.0,  8.0,
                                          13.0, 16.0, 30.0};
  auto curve = residue_curve(p, amplitudes, 0, 2);
  REQUIRE(curve.size() == amplitudes.size());
  for (std::size_t i = 0; i < curve.size(); ++i)
    CHECK(curve[i].amplitude == amplitudes[i]);

  CHECK_FALSE(curve[0].has_fbs); // A = 3: emitter folds into the band
  CHECK_FALSE(curve[5].has_fbs); // A = 16: likewise
  CHECK(curve[0].z2 == 0.0);

  REQUIRE(curve[1].has_fbs);
  CHECK(curve[1].z2 == doctest::Approx(0.0892776634079).epsilon(1e-9));
  REQUIRE(curve[2].has_fbs);
  CHECK(curve[2].z2 == doctest::Approx(0.660308205854).epsilon(1e-9));
  REQUIRE(curve[3].has_fbs);
  CHECK(curve[3].z2 == doctest::Approx(0.899037737209).epsilon(1e-9));
  REQUIRE(curve[4].has_fbs);
  CHECK(curve[4].z2 == doctest::Approx(0.973117785605).epsilon(1e-9));
  REQUIRE(curve[6].has_fbs);
  CHECK(curve[6].z2 == doctest::Approx(0.749730096662).epsilon(1e-9));

  // Each present point stores a genuine weight and an in-zone quasienergy.
  for (const ResiduePoint& pt : curve) {
    if (!pt.has_fbs) continue;
    CAPTURE(pt.amplitude);
    CHECK(pt.z2 > 0.0);
    CHECK(pt.z2 <= 1.0);
    CHECK(pt.epsilon_b >= -6.0);
    CHECK(pt.epsilon_b < 6.0);
    CHECK(std::abs(pt.epsilon_b) > 4.0); // outside the zone's band copy
  }
}

TEST_CASE("residue curve point agrees with a direct bound-state solve") {
  ModelParams p;
  const std::vector<double> one = {11.0};
  auto curve = residue_curve(p, one);
  REQUIRE(curve.size() == 1);
  REQUIRE(curve[0].has_fbs);
  p.drive_amplitude = 11.0;
  auto states = solve_fbs(p);
  REQUIRE(states.size() == 1);
  CHECK(curve[0].z2 ==
        doctest::Approx(states[0].residue * states[0].residue)
            .epsilon(1e-12));
  CHECK(curve[0].epsilon_b ==
        doctest::Approx(states[0].epsilon_b).epsilon(1e-12));
}

TEST_CASE("existence boundary near the lower onset") {
  ModelParams p;
  auto regions = fbs_regions(p, 3.5, 6.0, 0.25, 0.05, 0, 2);
  REQUIRE(regions.size() == 1);
  // The onset sits at A ~ 4.01; the window end stays inside the region.
  CHECK(regions[0].lo == doctest::Approx(4.009).epsilon(0.025));
  CHECK(regions[0].hi == 6.0);
}

TEST_CASE("fbs_regions validates its window") {
  ModelParams p;
  CHECK_THROWS_AS(fbs_regions(p, -1.0, 5.0), ConfigError);
  CHECK_THROWS_AS(fbs_regions(p, 5.0, 5.0), ConfigError);
  CHECK_THROWS_AS(fbs_regions(p, 0.0, 5.0, -0.2), ConfigError);
  CHECK_THROWS_AS(fbs_regions(p, 0.0, 5.0, 0.2, 0.0), ConfigError);
}

TEST_CASE("amplitude design: frozen sweep over two probe sizes") {
  ModelParams p;
  const std::vector<int> sizes = {4, 10};
  auto results = design_sweep(p, sizes, 1.1, 1e-4, 0, 0, 0.05, 2);
  REQUIRE(results.size() == 2);

  const DesignResult& n4 = results[0];
  CHECK(n4.n_atoms == 4);
  CHECK(n4.a == 1.1);
  CHECK(n4.branch == 0);
  CHECK(n4.a_opt == doctest::Approx(6.440625).epsilon(1e-9));
  CHECK(std::abs(n4.z2 - std::exp(-1.1 / 4.0)) <= 1e-4);
  CHECK(n4.y_value == doctest::Approx(y_n(n4.z2, 4)).epsilon(1e-14));

  const DesignResult& n10 = results[1];
  CHECK(n10.n_atoms == 10);
  CHECK(n10.a_opt == doctest::Approx(7.93125).epsilon(1e-9));
  CHECK(n10.z2 == doctest::Approx(0.895751683326).epsilon(1e-9));
  CHECK(std::abs(n10.z2 - std::exp(-0.11)) <= 1e-4);
  CHECK(n10.y_value == doctest::Approx(y_n(n10.z2, 10)).epsilon(1e-14));

  // Both sizes share the fixed-a prediction 2 / (e^a + 1), and a larger
  // probe demands a higher residue, hence a larger amplitude.
  for (const DesignResult& r : results)
    CHECK(r.predicted_prefactor ==
          doctest::Approx(0.499479788809765).epsilon(1e-12));
  CHECK(n4.a_opt < n10.a_opt);
}

TEST_CASE("unreachable residue target names the achievable range") {
  ModelParams p;
  // e^{-a/N} with a = 0.01, N = 10 asks for Z^2 = 0.999, above the crest
  // of the first amplitude region.
  CHECK_THROWS_WITH_AS(design_optimal_a(p, 10, 0.01, 1e-4, 0, 0, 0.2, 2),
                       doctest::Contains("outside the achievable range"),
                       DomainError);
}

TEST_CASE("branch index beyond the found regions is rejected") {
  ModelParams p;
  CHECK_THROWS_AS(design_optimal_a(p, 10, 1.1, 1e-4, 5, 0, 0.2, 2),
                  ConfigError);
  CHECK_THROWS_AS(design_optimal_a(p, 0), ConfigError);
  CHECK_THROWS_AS(design_optimal_a(p, 10, -1.0), ConfigError);
}

}  // TEST_SUITE
