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

#include <cstdint>
#include <optional>
#include <vector>

#include "privic/matrix.hpp"
#include "privic/privic.hpp"
#include "privic/prob.hpp"

namespace privic {

// Finite mesh over the interior of the probability simplex: all vectors
// (a_1/k, ..., a_m/k) with integer a_i >= 1 summing to k, in ascending
// lexicographic order. Coordinates are exact rationals stored by numerator.
struct SimplexMesh {
  std::size_t m = 0;
  std::size_t k = 0;
  std::vector<std::vector<unsigned>> states;  // numerators, each sums to k

  std::size_t size() const { return states.size(); }
  Pmf state_pmf(std::size_t i) const;
};

// Enumerates the mesh. Caps: m <= 4, k <= 20 (the state count grows like
// k^(m-1)); m > k has no interior states and is an error.
SimplexMesh enumerate_simplex(std::size_t m, std::size_t k);

// Index of the mesh state nearest to `pmf` in L1; ties resolve to the
// lexicographically smallest state.
std::size_t project_to_mesh(const Pmf& pmf, const SimplexMesh& mesh);

struct TransitionEstimate {
  SimplexMesh mesh;
  Matrix phi;  // phi(i, j) = estimated P(next state j | current state i)
  std::size_t trials_per_state = 0;
  std::uint64_t seed = 0;
};

// Monte-Carlo transition matrix of the PRIVIC estimate sequence projected to
// the mesh: from each state, runs `trials` independent single cycles against
// `truth` and tallies where the refreshed estimate projects. Trial (i, t)
// uses derive_seed(seed, i*trials + t).
TransitionEstimate estimate_transition(const SimplexMesh& mesh,
                                       const PrivicConfig& cfg,
                                       const TruthSampler& truth,
                                       const Matrix& dist, std::size_t trials,
                                       std::uint64_t seed);

struct StationaryResult {
  bool unique = false;
  std::optional<Pmf> psi;       // set when unique
  std::size_t iterations = 0;   // power-iteration steps taken
};

// Stationary distribution of the estimated chain by power iteration to L1
// tolerance 1e-12. A chain whose positive-support digraph is not strongly
// connected has no unique stationary law and is flagged instead. Periodic
// but irreducible chains are handled by iterating the half-lazy kernel
// (phi + I)/2, which shares the stationary vector and always mixes.
StationaryResult stationary_distribution(const Matrix& phi);

// Kac's identity check for one chain: psi(s) * E[return time to s] = 1.
struct HittingReport {
  std::size_t state = 0;
  double psi = 0.0;               // stationary mass of the state
  double expected_tau = 0.0;      // Monte-Carlo mean return time
  double inv_expected_tau = 0.0;  // 1 / expected_tau
  double sigma = 0.0;             // 1-sigma delta-method error of inv_expected_tau
  std::size_t excursions = 0;
};

// Simulates >= `excursions` return excursions from every state (chain must be
// strictly positive) and reports psi against the inverse mean return time.
std::vector<HittingReport> hitting_time_check(const Matrix& phi,
                                              std::size_t excursions,
                                              std::uint64_t seed);

// Occupancy frequencies of a single simulated trajectory of `steps` moves
// started at `start`.
Pmf chain_occupancy(const Matrix& phi, std::size_t steps, std::size_t start,
                    std::uint64_t seed);

}  // namespace privic
