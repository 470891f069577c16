//
// Copyright 2026 The PRIVIC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <doctest.h>

#include <cmath>
#include <vector>

#include "privic/errors.hpp"
#include "privic/markov.hpp"
#include "privic/matrix.hpp"
#include "privic/prob.hpp"

using namespace privic;

TEST_CASE("interior mesh enumeration matches hand lists") {
  // m=2, k=4: numerators (1,3), (2,2), (3,1).
  const SimplexMesh mesh24 = enumerate_simplex(2, 4);
  REQUIRE(mesh24.size() == 3);
  CHECK(mesh24.states[0] == std::vector<unsigned>{1, 3});
  CHECK(mesh24.states[1] == std::vector<unsigned>{2, 2});
  CHECK(mesh24.states[2] == std::vector<unsigned>{3, 1});
  CHECK(mesh24.state_pmf(0)[0] == doctest::Approx(0.25));
  CHECK(mesh24.state_pmf(0)[1] == doctest::Approx(0.75));

  // m=3, k=4: compositions of 4 into 3 positive parts -> C(3,2) = 3 states.
  const SimplexMesh mesh34 = enumerate_simplex(3, 4);
  REQUIRE(mesh34.size() == 3);
  CHECK(mesh34.states[0] == std::vector<unsigned>{1, 1, 2});
  CHECK(mesh34.states[1] == std::vector<unsigned>{1, 2, 1});
  CHECK(mesh34.states[2] == std::vector<unsigned>{2, 1, 1});

  // Counts follow the stars-and-bars formula C(k-1, m-1).
  CHECK(enumerate_simplex(2, 10).size() == 9);
  CHECK(enumerate_simplex(3, 6).size() == 10);
  CHECK(enumerate_simplex(4, 5).size() == 4);
}

TEST_CASE("mesh caps and empty interiors are rejected") {
  CHECK_THROWS_AS(enumerate_simplex(5, 10), CapabilityError);
  CHECK_THROWS_AS(enumerate_simplex(3, 21), CapabilityError);
  CHECK_THROWS_AS(enumerate_simplex(4, 3), ConfigError);  // m > k
}

TEST_CASE("projection picks the nearest state, ties lexicographic") {
  const SimplexMesh mesh = enumerate_simplex(2, 4);
  CHECK(project_to_mesh(Pmf({0.26, 0.74}), mesh) == 0);
  CHECK(project_to_mesh(Pmf({0.55, 0.45}), mesh) == 1);
  CHECK(project_to_mesh(Pmf({0.95, 0.05}), mesh) == 2);
  // (0.375, 0.625) sits exactly between (1,3)/4 and (2,2)/4.
  CHECK(project_to_mesh(Pmf({0.375, 0.625}), mesh) == 0);
}

TEST_CASE("stationary law of a two-state chain matches the closed form") {
  // P = [[0.9, 0.1], [0.5, 0.5]]: psi solves psi P = psi -> (5/6, 1/6).
  Matrix phi(2, 2, 0.0);
  phi(0, 0) = 0.9;
  phi(0, 1) = 0.1;
  phi(1, 0) = 0.5;
  phi(1, 1) = 0.5;
  const StationaryResult res = stationary_distribution(phi);
  REQUIRE(res.unique);
  CHECK((*res.psi)[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-10));
  CHECK((*res.psi)[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-10));

  // Invariance: psi phi = psi.
  for (std::size_t j = 0; j < 2; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < 2; ++i) v += (*res.psi)[i] * phi(i, j);
    CHECK(v == doctest::Approx((*res.psi)[j]).epsilon(1e-10));
  }
}

TEST_CASE("periodic irreducible chains still converge") {
  // The two-state flip chain has period 2; the half-lazy iteration must
  // still find psi = (1/2, 1/2).
  Matrix flip(2, 2, 0.0);
  flip(0, 1) = 1.0;
  flip(1, 0) = 1.0;
  const StationaryResult res = stationary_distribution(flip);
  REQUIRE(res.unique);
  CHECK((*res.psi)[0] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("reducible chains are flagged, not answered") {
  Matrix eye(3, 3, 0.0);
  for (std::size_t i = 0; i < 3; ++i) eye(i, i) = 1.0;
  const StationaryResult res = stationary_distribution(eye);
  CHECK_FALSE(res.unique);
  CHECK_FALSE(res.psi.has_value());
}

TEST_CASE("return times invert the stationary mass") {
  // Fair two-state flip-or-stay chain: psi = (1/2, 1/2), E[tau] = 2.
  Matrix phi(2, 2, 0.5);
  const std::vector<HittingReport> reports = hitting_time_check(phi, 20000, 3);
  REQUIRE(reports.size() == 2);
  for (const HittingReport& r : reports) {
    CHECK(r.excursions >= 20000);
    CHECK(r.expected_tau == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::abs(r.inv_expected_tau - 0.5) < 3.0 * r.sigma);
  }
}

TEST_CASE("occupancy frequencies approach the stationary law") {
  Matrix phi(2, 2, 0.0);
  phi(0, 0) = 0.9;
  phi(0, 1) = 0.1;
  phi(1, 0) = 0.5;
  phi(1, 1) = 0.5;
  const Pmf occ = chain_occupancy(phi, 200000, 0, 9);
  CHECK(occ[0] == doctest::Approx(5.0 / 6.0).epsilon(0.02));
  // Occupancy is deterministic in the seed.
  const Pmf occ2 = chain_occupancy(phi, 200000, 0, 9);
  CHECK(occ[0] == occ2[0]);
}
