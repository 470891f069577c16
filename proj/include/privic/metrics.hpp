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

#include "privic/matrix.hpp"
#include "privic/prob.hpp"

namespace privic {

// Mutual information I(X;Y) in nats between a prior on true values and the
// channel's reports, with the usual convention 0*ln(0/q) = 0.
double mutual_information(const Pmf& prior, const Channel& channel);

// Expected distortion sum_{x,y} prior[x]*C[x][y]*dist[x][y]; km when `dist`
// is in km.
double avg_distortion(const Pmf& prior, const Channel& channel,
                      const Matrix& dist);

// Total variation distance, (1/2) * L1.
double tv_distance(const Pmf& p1, const Pmf& p2);

// An optimal coupling: plan(i, j) is mass moved from source cell i to target
// cell j; cost is the total work sum plan(i,j)*dist(i,j).
struct TransportPlan {
  Matrix plan;
  double cost = 0.0;
};

// Earth mover's distance between two distributions over the same metric
// space, solved exactly (successive shortest augmenting paths with Johnson
// potentials on the bipartite transportation graph). Row sums of the plan
// reproduce `from`, column sums reproduce `to`, within 1e-9.
TransportPlan emd(const Pmf& from, const Pmf& to, const Matrix& dist);

// EMD cost only.
double emd_cost(const Pmf& from, const Pmf& to, const Matrix& dist);

// How far an estimated distribution sits from the true one, measured as the
// earth mover's distance on the ground metric. Named for report vocabulary.
double statistical_utility(const Pmf& estimate, const Pmf& truth,
                           const Matrix& dist);

}  // namespace privic
