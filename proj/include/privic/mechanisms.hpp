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
#include <vector>

#include "privic/matrix.hpp"
#include "privic/prob.hpp"

namespace privic {

struct BaConfig {
  double beta = 1.0;          // loss parameter: larger = less noise
  std::size_t max_iters = 500;
  double tol = 1e-10;         // max over rows of the L1 row change

  // Exactly `iters` steps (tolerance effectively disabled), for reproducing
  // fixed-iteration protocols.
  static BaConfig fixed(double beta, std::size_t iters);
};

struct BaResult {
  Channel channel;
  std::size_t iterations_used = 0;
  bool converged = false;
  double avg_distortion = 0.0;  // achieved E[d(x,y)], km on km metrics
  double mi = 0.0;              // achieved I(X;Y), nats
};

// One Blahut-Arimoto refinement: with output marginal c(y) = sum_x
// prior[x]*C[x][y], the next channel is
//   C'[x][y] = c(y) exp(-beta d(x,y)) / sum_z c(z) exp(-beta d(x,z)).
// Rows are renormalized in log domain (per-row max subtraction), so they sum
// to 1 even for large beta*d. Requires a full-support prior and a channel
// whose output marginal is positive everywhere.
Channel ba_step(const Pmf& prior, const Channel& channel, double beta,
                const Matrix& dist);

// Iterates ba_step from `init` until the channel moves less than cfg.tol
// (max-row L1) or cfg.max_iters is hit, and reports the achieved
// distortion/leakage of the final channel.
BaResult ba_run(const Pmf& prior, const Channel& init, const BaConfig& cfg,
                const Matrix& dist);

// Exponential kernel restricted to the grid:
//   C[x][y] = exp(-eps d(x,y)) / sum_z exp(-eps d(x,z)).
// This is the planar Laplace mechanism's shape with all mass renormalized
// onto the cells, so it satisfies eps-geo-indistinguishability but is not the
// continuous mechanism followed by snapping.
Channel laplace_channel(double eps, const Matrix& dist);

// Tightest epsilon such that C[x][y] <= exp(eps*d(x,x'))*C[x'][y] for all
// x, x', y with d(x,x') > 0: the geo-indistinguishability level the channel
// actually provides. Any zero entry makes the ratio unbounded: +infinity.
double verify_geo_ind(const Channel& channel, const Matrix& dist);

// Elasticity diagnostics. An elastic channel is a fixed point of the BA
// update under its own output distribution c = push_forward(prior, channel):
// each row x is proportional to c(y)*exp(-beta d(x,y)).
struct ElasticReport {
  // max |C[x][y] - c(y)exp(-beta d(x,y))/Z_x| over all entries.
  double max_abs_residual = 0.0;
  // Per row, the max relative spread of C[x][y] / (c(y)exp(-beta d(x,y)))
  // around its mean. Zero spread in row x certifies the row is proportional
  // both to the output mass c(y) and to the kernel exp(-beta d(x,y)).
  std::vector<double> row_ratio_spread;
};

ElasticReport elastic_report(const Channel& channel, const Pmf& prior,
                             double beta, const Matrix& dist);

// Shorthand for elastic_report(...).max_abs_residual.
double elastic_residual(const Channel& channel, const Pmf& prior, double beta,
                        const Matrix& dist);

}  // namespace privic
