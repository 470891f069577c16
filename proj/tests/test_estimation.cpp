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
#include "privic/estimation.hpp"
#include "privic/matrix.hpp"
#include "privic/mechanisms.hpp"
#include "privic/prob.hpp"
#include "privic/rng.hpp"

using namespace privic;

namespace {

Matrix line_metric(std::size_t m, double step = 1.0) {
  Matrix d(m, m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      d(i, j) = step * std::abs(static_cast<double>(i) - static_cast<double>(j));
  return d;
}

double loglik(const Pmf& theta, const Channel& c, const Pmf& q) {
  const Pmf out = push_forward(theta, c);
  double ll = 0.0;
  for (std::size_t y = 0; y < q.size(); ++y)
    if (q[y] > 0.0) ll += q[y] * std::log(out[y]);
  return ll;
}

// Random row-stochastic channel mixed with the identity. The diagonal
// dominance keeps the rows independent, so the likelihood has a unique,
// well-separated maximum and the recursion converges at a usable rate;
// channels with nearly dependent rows flatten the likelihood along a ridge
// and say nothing about correctness.
Channel random_positive_channel(Rng& rng, std::size_t m) {
  std::vector<double> c(m * m);
  for (std::size_t x = 0; x < m; ++x) {
    double row_sum = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      c[x * m + y] = rng.uniform01() + 0.05;
      row_sum += c[x * m + y];
    }
    for (std::size_t y = 0; y < m; ++y) {
      c[x * m + y] /= 2.0 * row_sum;
      if (x == y) c[x * m + y] += 0.5;
    }
  }
  return Channel(m, c);
}

}  // namespace

TEST_CASE("empirical frequencies count draws exactly") {
  SampleSet s;
  s.indices = {0, 2, 2, 1, 2};
  const Pmf q = empirical_pmf(s, 4);
  CHECK(q[0] == doctest::Approx(0.2));
  CHECK(q[1] == doctest::Approx(0.2));
  CHECK(q[2] == doctest::Approx(0.6));
  CHECK(q[3] == doctest::Approx(0.0));
  CHECK_THROWS_AS(empirical_pmf(SampleSet{}, 3), ConfigError);
}

TEST_CASE("single update step has a closed form") {
  // theta = (0.5, 0.5), C = [[0.75, 0.25], [0.25, 0.75]], q = (0.6, 0.4):
  // posteriors are (0.75, 0.25) given y=0 and (0.25, 0.75) given y=1, so
  // theta' = 0.6*(0.75, 0.25) + 0.4*(0.25, 0.75) = (0.55, 0.45).
  const Pmf theta = Pmf::uniform(2);
  const Channel c(2, {0.75, 0.25, 0.25, 0.75});
  const Pmf next = ibu_step(theta, c, Pmf({0.6, 0.4}));
  CHECK(next[0] == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(next[1] == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("fixed point recovers the exact mixture inverse") {
  // When q is exactly theta* C for an invertible channel, the recursion's
  // fixed point is theta*. With C as above and q = (0.6, 0.4), theta* solves
  // 0.75 a + 0.25 (1-a) = 0.6 => a = 0.7.
  const Channel c(2, {0.75, 0.25, 0.25, 0.75});
  IbuConfig cfg;
  cfg.max_iters = 20000;
  cfg.tol = 1e-14;
  const IbuResult res = ibu_run(Pmf::uniform(2), c, Pmf({0.6, 0.4}), cfg);
  CHECK(res.converged);
  CHECK(res.estimate[0] == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(res.estimate[1] == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("likelihood never decreases along the recursion") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = 3 + trial % 3;
    const Channel c = random_positive_channel(rng, m);
    std::vector<double> w(m);
    for (double& v : w) v = rng.uniform01() + 1e-3;
    const Pmf q = Pmf::from_weights(w);
    const IbuResult res = ibu_run(Pmf::uniform(m), c, q, IbuConfig::fixed(200));
    REQUIRE(res.loglik_trajectory.size() == res.iterations_used);
    for (std::size_t t = 1; t < res.loglik_trajectory.size(); ++t)
      CHECK(res.loglik_trajectory[t] >= res.loglik_trajectory[t - 1] - 1e-12);
    CHECK(res.loglik_trajectory.back() ==
          doctest::Approx(loglik(res.estimate, c, q)).epsilon(1e-6));
  }
}

TEST_CASE("trajectory recording keeps every intermediate estimate") {
  const Channel c(2, {0.75, 0.25, 0.25, 0.75});
  IbuConfig cfg = IbuConfig::fixed(5);
  cfg.record_trajectory = true;
  const IbuResult res = ibu_run(Pmf::uniform(2), c, Pmf({0.6, 0.4}), cfg);
  REQUIRE(res.trajectory.has_value());
  // Trajectory starts at theta0 and records every iterate after it.
  CHECK(res.trajectory->size() == res.iterations_used + 1);
  CHECK(res.iterations_used == 5);
  CHECK((*res.trajectory)[0][0] == doctest::Approx(0.5));
  // Second entry is the hand-checked single step.
  CHECK((*res.trajectory)[1][0] == doctest::Approx(0.55).epsilon(1e-12));
}

TEST_CASE("impossible observed report is an error, zero-frequency is not") {
  const Channel c(2, {1.0, 0.0, 1.0, 0.0});
  // q puts mass on report 1, which no true value can produce.
  CHECK_THROWS_AS(ibu_step(Pmf::uniform(2), c, Pmf({0.5, 0.5})),
                  ConfigError);
  // q confined to report 0 is fine.
  const Pmf ok = ibu_step(Pmf::uniform(2), c, Pmf({1.0, 0.0}));
  CHECK(ok[0] == doctest::Approx(0.5));
}

TEST_CASE("independent maximizer agrees with the analytic inverse") {
  // Same invertible 2x2 setting: the likelihood optimum over the simplex is
  // the exact preimage (0.7, 0.3).
  const Channel c(2, {0.75, 0.25, 0.25, 0.75});
  const MleResult mle = mle_oracle(c, Pmf({0.6, 0.4}));
  CHECK(mle.unique);
  CHECK(mle.estimate[0] == doctest::Approx(0.7).epsilon(1e-5));
}

TEST_CASE("constant-row channel has a flat likelihood") {
  const Channel constant(3, {0.2, 0.5, 0.3, 0.2, 0.5, 0.3, 0.2, 0.5, 0.3});
  const MleResult mle = mle_oracle(constant, Pmf({0.2, 0.5, 0.3}));
  CHECK_FALSE(mle.unique);
}

TEST_CASE("maximizer rejects state spaces beyond its design size") {
  const std::size_t m = 7;
  CHECK_THROWS_AS(mle_oracle(Channel::uniform(m), Pmf::uniform(m)),
                  CapabilityError);
}

TEST_CASE("recursion and maximizer find the same optimum from any start") {
  Rng rng(4242);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t m = 3 + trial % 4;  // 3..6
    const Channel c = random_positive_channel(rng, m);
    std::vector<double> w(m);
    for (double& v : w) v = rng.uniform01() + 1e-3;
    const Pmf truth = Pmf::from_weights(w);
    const Pmf q = push_forward(truth, c);

    const MleResult mle = mle_oracle(c, q);
    IbuConfig cfg;
    cfg.max_iters = 60000;
    cfg.tol = 1e-13;
    for (int start = 0; start < 3; ++start) {
      Pmf theta0 = Pmf::uniform(m);
      if (start > 0) {
        std::vector<double> s(m);
        for (double& v : s) v = rng.uniform01() + 0.05;
        theta0 = Pmf::from_weights(s);
      }
      const IbuResult res = ibu_run(theta0, c, q, cfg);
      double l1 = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        l1 += std::abs(res.estimate[i] - mle.estimate[i]);
      CHECK(l1 < 2e-4);
    }
  }
}

TEST_CASE("the two recursions are the same map step by step") {
  for (const std::size_t m : {3u, 5u}) {
    const Matrix d = line_metric(m, 0.7);
    const Pmf prior = Pmf::from_weights([&] {
      std::vector<double> w(m);
      for (std::size_t i = 0; i < m; ++i) w[i] = 1.0 + double(i % 3);
      return w;
    }());
    for (double beta : {0.5, 2.0}) {
      const DualityTrace trace = duality_trace(prior, beta, d, 30);
      // Entries cover step 0 (both starts) through step 30.
      REQUIRE(trace.l1_gaps.size() == 31);
      REQUIRE(trace.ba_marginals.size() == 31);
      REQUIRE(trace.ibu_estimates.size() == 31);
      for (double gap : trace.l1_gaps) CHECK(gap < 1e-12);
    }
  }
}
