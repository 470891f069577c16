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

#include "privic/geo.hpp"
#include "privic/matrix.hpp"
#include "privic/metrics.hpp"
#include "privic/presets.hpp"
#include "privic/privic.hpp"
#include "privic/prob.hpp"
#include "privic/rng.hpp"

using namespace privic;

namespace {

GridSpace small_grid() {
  const double deg_per_km = 1.0 / (6371.0088 * M_PI / 180.0);
  return GridSpace(BoundingBox{0.0, 3.0 * deg_per_km, 0.0, 4.0 * deg_per_km},
                   3, 4);
}

PrivicConfig quick_config(double beta, std::size_t cycles, std::uint64_t seed) {
  PrivicConfig cfg;
  cfg.beta = beta;
  cfg.cycles = cycles;
  cfg.n_per_cycle = 2000;
  cfg.ba = BaConfig::fixed(beta, 8);
  cfg.ibu = IbuConfig::fixed(10);
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("truth sampler reproduces its distribution") {
  const Pmf dist({0.5, 0.3, 0.2});
  const TruthSampler truth = TruthSampler::from_pmf(dist);
  CHECK(truth.space_size() == 3);
  const SampleSet a = truth.draw(5000, 11);
  const SampleSet b = truth.draw(5000, 11);
  CHECK(a.indices == b.indices);  // same seed, same batch
  std::vector<double> freq(3, 0.0);
  for (std::size_t idx : a.indices) freq[idx] += 1.0 / 5000.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double sigma = std::sqrt(dist[i] * (1 - dist[i]) / 5000.0);
    CHECK(std::abs(freq[i] - dist[i]) < 4.0 * sigma + 1e-12);
  }
}

TEST_CASE("dataset-backed sampler bootstraps only observed values") {
  SampleSet data;
  data.indices = {1, 1, 3, 3, 3, 3};
  const TruthSampler truth = TruthSampler::from_samples(data, 5);
  CHECK(truth.distribution()[1] == doctest::Approx(1.0 / 3.0));
  CHECK(truth.distribution()[3] == doctest::Approx(2.0 / 3.0));
  const SampleSet draw = truth.draw(200, 7);
  for (std::size_t idx : draw.indices) CHECK((idx == 1 || idx == 3));
}

TEST_CASE("whole run is reproducible from its seed") {
  const GridSpace grid = small_grid();
  const Pmf truth_dist = synthetic_prior(grid, "city");
  const TruthSampler truth = TruthSampler::from_pmf(truth_dist);
  const PrivicConfig cfg = quick_config(1.0, 3, 42);

  const PrivicTrace t1 =
      privic_run(Pmf::uniform(grid.cell_count()), truth, cfg, grid.dist(), truth_dist);
  const PrivicTrace t2 =
      privic_run(Pmf::uniform(grid.cell_count()), truth, cfg, grid.dist(), truth_dist);
  REQUIRE(t1.cycles.size() == 3);
  REQUIRE(t2.cycles.size() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t i = 0; i < grid.cell_count(); ++i)
      CHECK(t1.cycles[t].estimate[i] == t2.cycles[t].estimate[i]);
    CHECK(t1.cycles[t].draw_seed == t2.cycles[t].draw_seed);
    CHECK(*t1.cycles[t].emd_to_truth == *t2.cycles[t].emd_to_truth);
  }

  // A different seed must change the sampled path.
  PrivicConfig other = cfg;
  other.seed = 43;
  const PrivicTrace t3 =
      privic_run(Pmf::uniform(grid.cell_count()), truth, other, grid.dist(), truth_dist);
  bool any_diff = false;
  for (std::size_t i = 0; i < grid.cell_count(); ++i)
    if (t3.cycles.back().estimate[i] != t1.cycles.back().estimate[i])
      any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("first cycle reports the distance of the starting estimate") {
  // emd_to_truth measures the estimate the cycle started from, so cycle 1 is
  // the uniform-vs-truth distance: sampling noise cannot touch it.
  const GridSpace grid = small_grid();
  const Pmf truth_dist = synthetic_prior(grid, "gauss:1,0.2,0.3,0.6");
  const TruthSampler truth = TruthSampler::from_pmf(truth_dist);
  const double expected =
      emd_cost(Pmf::uniform(grid.cell_count()), truth_dist, grid.dist());

  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const PrivicTrace trace =
        privic_run(Pmf::uniform(grid.cell_count()), truth,
                   quick_config(1.0, 2, seed), grid.dist(), truth_dist);
    REQUIRE(trace.cycles[0].emd_to_truth.has_value());
    CHECK(*trace.cycles[0].emd_to_truth ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("cycle records carry the channel diagnostics") {
  const GridSpace grid = small_grid();
  const Pmf truth_dist = synthetic_prior(grid, "city");
  const TruthSampler truth = TruthSampler::from_pmf(truth_dist);
  const double beta = 1.0;
  const PrivicTrace trace =
      privic_run(Pmf::uniform(grid.cell_count()), truth,
                 quick_config(beta, 4, 5), grid.dist(), truth_dist);
  for (const CycleRecord& rec : trace.cycles) {
    CHECK(rec.beta == beta);
    CHECK(rec.epsilon_audit <= 2.0 * beta + 1e-6);
    CHECK(rec.epsilon_audit > 0.0);
    CHECK(rec.mi >= 0.0);
    CHECK(rec.avg_distortion >= 0.0);
    CHECK(rec.ba_iterations == 8);
    CHECK(rec.ibu_iterations == 10);
  }
  // Cycles are numbered from 1 upward.
  CHECK(trace.cycles.front().cycle == 1);
  CHECK(trace.cycles.back().cycle == 4);
}

TEST_CASE("estimates sharpen over cycles on a learnable prior") {
  const GridSpace grid = small_grid();
  const Pmf truth_dist = synthetic_prior(grid, "gauss:1,0.7,0.6,0.5");
  const TruthSampler truth = TruthSampler::from_pmf(truth_dist);
  const PrivicTrace trace =
      privic_run(Pmf::uniform(grid.cell_count()), truth,
                 quick_config(1.0, 6, 17), grid.dist(), truth_dist);
  const double first = *trace.cycles.front().emd_to_truth;
  // Last record measures the estimate entering the final cycle.
  const double last = *trace.cycles.back().emd_to_truth;
  CHECK(last < 0.5 * first);
}

TEST_CASE("single cycle equals one run step with the derived seed") {
  const GridSpace grid = small_grid();
  const Pmf truth_dist = synthetic_prior(grid, "city");
  const TruthSampler truth = TruthSampler::from_pmf(truth_dist);
  const PrivicConfig cfg = quick_config(0.8, 1, 99);

  const PrivicTrace trace = privic_run(Pmf::uniform(grid.cell_count()), truth,
                                       cfg, grid.dist(), truth_dist);
  const auto [theta, rec] =
      privic_cycle(Pmf::uniform(grid.cell_count()), truth, cfg, grid.dist(),
                   derive_seed(cfg.seed, 1));
  for (std::size_t i = 0; i < grid.cell_count(); ++i)
    CHECK(theta[i] == trace.cycles[0].estimate[i]);
  CHECK(rec.draw_seed == trace.cycles[0].draw_seed);
}
