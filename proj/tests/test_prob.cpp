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
#include "privic/prob.hpp"
#include "privic/rng.hpp"

using namespace privic;

TEST_CASE("pmf validates mass and support") {
  CHECK_NOTHROW(Pmf({0.5, 0.5}));
  CHECK_THROWS_AS(Pmf({0.6, 0.6}), ConfigError);
  CHECK_THROWS_AS(Pmf({1.5, -0.5}), ConfigError);
  CHECK_THROWS_AS(Pmf(std::vector<double>{}), ConfigError);

  const Pmf u = Pmf::uniform(4);
  CHECK(u.size() == 4);
  CHECK(u[2] == doctest::Approx(0.25));
  CHECK(u.full_support());

  const Pmf p = Pmf::point(3, 1);
  CHECK(p[1] == 1.0);
  CHECK(p[0] == 0.0);
  CHECK_FALSE(p.full_support());
  CHECK_THROWS_AS(Pmf::point(3, 7), ConfigError);
}

TEST_CASE("pmf from weights normalizes") {
  const Pmf p = Pmf::from_weights({2.0, 6.0});
  CHECK(p[0] == doctest::Approx(0.25));
  CHECK(p[1] == doctest::Approx(0.75));
  CHECK_THROWS_AS(Pmf::from_weights({0.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(Pmf::from_weights({1.0, -1e-3}), ConfigError);
}

TEST_CASE("channel validates row stochasticity") {
  CHECK_NOTHROW(Channel(2, {0.5, 0.5, 0.1, 0.9}));
  CHECK_THROWS_AS(Channel(2, {0.5, 0.6, 0.1, 0.9}), ConfigError);
  CHECK_THROWS_AS(Channel(2, {1.5, -0.5, 0.1, 0.9}), ConfigError);

  const Channel u = Channel::uniform(3);
  CHECK(u(0, 2) == doctest::Approx(1.0 / 3));
  CHECK(u.positive());

  const Channel id = Channel::identity(3);
  CHECK(id(1, 1) == 1.0);
  CHECK(id(1, 0) == 0.0);
  CHECK_FALSE(id.positive());
}

TEST_CASE("sampling is deterministic and follows the pmf") {
  const Pmf p({0.2, 0.5, 0.3});
  const SampleSet a = sample(p, 5000, 42);
  const SampleSet b = sample(p, 5000, 42);
  CHECK(a.indices == b.indices);
  CHECK(a.seed == 42);

  std::vector<std::size_t> counts(3, 0);
  for (std::size_t i : a.indices) {
    REQUIRE(i < 3);
    ++counts[i];
  }
  // Multinomial fluctuations at n=5000 stay well inside 3 sigma (~0.021).
  CHECK(std::abs(counts[0] / 5000.0 - 0.2) < 0.021);
  CHECK(std::abs(counts[1] / 5000.0 - 0.5) < 0.025);

  const SampleSet c = sample(p, 5000, 43);
  CHECK(a.indices != c.indices);
}

TEST_CASE("sampling a point mass always returns its cell") {
  const SampleSet s = sample(Pmf::point(5, 2), 100, 7);
  for (std::size_t i : s.indices) CHECK(i == 2);
}

TEST_CASE("obfuscation applies channel rows") {
  // Row 0 always reports 1; row 1 always reports 0.
  const Channel flip(2, {0.0, 1.0, 1.0, 0.0});
  SampleSet raw;
  raw.indices = {0, 1, 1, 0};
  const SampleSet noisy = obfuscate(raw, flip, 9);
  CHECK(noisy.indices == std::vector<std::size_t>{1, 0, 0, 1});

  const SampleSet again = obfuscate(raw, flip, 10);
  CHECK(noisy.indices == again.indices);  // deterministic channel

  const Channel fair(2, {0.5, 0.5, 0.5, 0.5});
  const SampleSet n1 = obfuscate(raw, fair, 11);
  const SampleSet n2 = obfuscate(raw, fair, 11);
  CHECK(n1.indices == n2.indices);  // same seed, same reports
}

TEST_CASE("push forward computes the output marginal") {
  const Pmf p({0.7, 0.3});
  const Channel c(2, {0.75, 0.25, 0.25, 0.75});
  const Pmf out = push_forward(p, c);
  CHECK(out[0] == doctest::Approx(0.6));
  CHECK(out[1] == doctest::Approx(0.4));

  const Pmf u = push_forward(Pmf({0.9, 0.1}), Channel::uniform(2));
  CHECK(u[0] == doctest::Approx(0.5));
}

TEST_CASE("seed derivation decorrelates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  Rng r(derive_seed(123, 4));
  const double v = r.uniform01();
  CHECK(v >= 0.0);
  CHECK(v < 1.0);
}
