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

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "privic/matrix.hpp"
#include "privic/prob.hpp"

namespace privic {

// Frequency distribution of a sample batch over {0, ..., m-1}.
Pmf empirical_pmf(const SampleSet& samples, std::size_t m);

struct IbuConfig {
  std::size_t max_iters = 1000;
  double tol = 1e-10;              // L1 between successive estimates
  bool record_trajectory = false;  // keep every intermediate estimate

  // Exactly `iters` steps (tolerance effectively disabled).
  static IbuConfig fixed(std::size_t iters);
};

struct IbuResult {
  Pmf estimate;
  std::size_t iterations_used = 0;
  bool converged = false;
  // Observed-report log-likelihood sum_y q(y) ln((theta C)(y)) after each
  // step; EM guarantees it never decreases.
  std::vector<double> loglik_trajectory;
  std::optional<std::vector<Pmf>> trajectory;
};

// One iterative Bayesian update:
//   theta'(x) = sum_y q(y) * theta(x) C[x][y] / (sum_z theta(z) C[z][y]),
// the EM step for the latent true distribution given observed report
// frequencies q. Terms with q(y) = 0 are skipped exactly; a report with
// q(y) > 0 that the current mixture gives zero probability is an error.
Pmf ibu_step(const Pmf& theta, const Channel& channel, const Pmf& q);

// Iterates ibu_step from theta0 until the estimate moves less than cfg.tol
// (L1) or cfg.max_iters is reached.
IbuResult ibu_run(const Pmf& theta0, const Channel& channel, const Pmf& q,
                  const IbuConfig& cfg);

struct MleResult {
  Pmf estimate;
  double grid_resolution = 0.0;  // pitch of the search grid actually used
  bool unique = true;            // false when the likelihood is flat at the top
};

// Independent maximizer of the observed-report likelihood
// L(theta) = sum_y q(y) ln((theta C)(y)) over the whole simplex: exhaustive
// grid search followed by pairwise mass-transfer golden-section refinement.
// L is concave, so the refinement reaches the global optimum from the best
// grid point. Supports m <= 6; a flat optimum (e.g. a constant-row channel)
// is flagged non-unique and the lexicographically smallest grid optimizer is
// returned.
MleResult mle_oracle(const Channel& channel, const Pmf& q);

// Side-by-side run of two recursions that are algebraically the same map:
// (a) the output-marginal recursion of Blahut-Arimoto starting from the
//     uniform channel's marginal, and
// (b) the iterative Bayesian update driven by the raw symmetric kernel
//     exp(-beta d(x,y)) with `prior` playing the observed frequencies and
//     the roles of true/reported values swapped, starting uniform.
// Both sequences are computed through their own code paths; l1_gaps[t] is the
// distance between them at step t and stays at rounding level.
struct DualityTrace {
  std::vector<Pmf> ba_marginals;
  std::vector<Pmf> ibu_estimates;
  std::vector<double> l1_gaps;
};

DualityTrace duality_trace(const Pmf& prior, double beta, const Matrix& dist,
                           std::size_t steps);

}  // namespace privic
