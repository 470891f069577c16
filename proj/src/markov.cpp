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

#include "privic/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "privic/errors.hpp"
#include "privic/rng.hpp"

namespace privic {

namespace {

constexpr std::size_t kMaxMeshDim = 4;
constexpr std::size_t kMaxMeshSteps = 20;

void check_square_stochastic(const Matrix& phi, const char* who) {
  const std::size_t n = phi.rows();
  if (n == 0 || phi.cols() != n)
    throw ConfigError(std::string(who) + ": matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(phi(i, j) >= 0.0))
        throw ConfigError(std::string(who) + ": negative or NaN entry");
      sum += phi(i, j);
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ConfigError(std::string(who) + ": row " + std::to_string(i) +
                        " sums to " + std::to_string(sum));
  }
}

// One simulated move of the chain.
std::size_t step_chain(const Matrix& phi, std::size_t state, Rng& rng) {
  const std::size_t n = phi.rows();
  const double u = rng.uniform01();
  double acc = 0.0;
  std::size_t last_positive = state;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = phi(state, j);
    if (p > 0.0) last_positive = j;
    acc += p;
    if (u < acc) return j;
  }
  return last_positive;  // u fell past rounding-short mass
}

}  // namespace

Pmf SimplexMesh::state_pmf(std::size_t i) const {
  std::vector<double> p(m);
  for (std::size_t c = 0; c < m; ++c)
    p[c] = static_cast<double>(states[i][c]) / static_cast<double>(k);
  return Pmf(std::move(p));
}

SimplexMesh enumerate_simplex(std::size_t m, std::size_t k) {
  if (m == 0) throw ConfigError("simplex mesh: m must be >= 1");
  if (m > kMaxMeshDim)
    throw CapabilityError("simplex mesh: supports m <= " +
                          std::to_string(kMaxMeshDim) + ", got " +
                          std::to_string(m));
  if (k > kMaxMeshSteps)
    throw CapabilityError("simplex mesh: supports k <= " +
                          std::to_string(kMaxMeshSteps) + ", got " +
                          std::to_string(k));
  if (m > k)
    throw ConfigError("simplex mesh: no interior states for m > k");

  SimplexMesh mesh;
  mesh.m = m;
  mesh.k = k;

  // Compositions of k into m parts >= 1, ascending lexicographic.
  std::vector<unsigned> comp(m, 1);
  comp[m - 1] = static_cast<unsigned>(k - (m - 1));
  for (;;) {
    mesh.states.push_back(comp);
    std::size_t j = m - 1;
    while (j > 0 && comp[j] == 1) --j;
    if (j == 0) break;
    const unsigned moved = comp[j];
    comp[j] = 1;
    comp[m - 1] = moved - 1;
    ++comp[j - 1];
  }
  return mesh;
}

std::size_t project_to_mesh(const Pmf& pmf, const SimplexMesh& mesh) {
  if (pmf.size() != mesh.m) throw ConfigError("project_to_mesh: size mismatch");
  if (mesh.size() == 0) throw ConfigError("project_to_mesh: empty mesh");

  std::size_t best = 0;
  double best_l1 = std::numeric_limits<double>::infinity();
  const double inv_k = 1.0 / static_cast<double>(mesh.k);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    double l1 = 0.0;
    for (std::size_t c = 0; c < mesh.m; ++c)
      l1 += std::abs(static_cast<double>(mesh.states[i][c]) * inv_k - pmf[c]);
    // States are in ascending lexicographic order, so strict improvement
    // keeps the lexicographically smallest among ties.
    if (l1 < best_l1 - 1e-15) {
      best_l1 = l1;
      best = i;
    }
  }
  return best;
}

TransitionEstimate estimate_transition(const SimplexMesh& mesh,
                                       const PrivicConfig& cfg,
                                       const TruthSampler& truth,
                                       const Matrix& dist, std::size_t trials,
                                       std::uint64_t seed) {
  if (trials == 0) throw ConfigError("estimate_transition: trials must be >= 1");
  const std::size_t n_states = mesh.size();

  TransitionEstimate est;
  est.mesh = mesh;
  est.phi = Matrix(n_states, n_states, 0.0);
  est.trials_per_state = trials;
  est.seed = seed;

  const double weight = 1.0 / static_cast<double>(trials);
  for (std::size_t i = 0; i < n_states; ++i) {
    const Pmf theta = mesh.state_pmf(i);
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t cycle_seed = derive_seed(seed, i * trials + t);
      auto [next, record] = privic_cycle(theta, truth, cfg, dist, cycle_seed);
      est.phi(i, project_to_mesh(next, mesh)) += weight;
    }
  }
  return est;
}

StationaryResult stationary_distribution(const Matrix& phi) {
  check_square_stochastic(phi, "stationary_distribution");
  const std::size_t n = phi.rows();

  // Uniqueness needs one communicating class: strong connectivity of the
  // positive-support digraph, checked by forward and backward reachability
  // from state 0.
  auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        const double p = forward ? phi(v, w) : phi(w, v);
        if (p > 0.0 && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return seen;
  };
  const auto fwd = reach(true);
  const auto bwd = reach(false);
  for (std::size_t v = 0; v < n; ++v)
    if (!fwd[v] || !bwd[v]) return {false, std::nullopt, 0};

  // Power iteration on the half-lazy kernel (phi + I)/2: same stationary
  // vector, guaranteed aperiodic.
  std::vector<double> psi(n, 1.0 / static_cast<double>(n)), next(n);
  StationaryResult result;
  result.unique = true;
  for (std::size_t it = 1; it <= 200000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = psi[i];
      if (w == 0.0) continue;
      next[i] += 0.5 * w;
      const double* row = phi.row(i);
      for (std::size_t j = 0; j < n; ++j) next[j] += 0.5 * w * row[j];
    }
    double l1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) l1 += std::abs(next[j] - psi[j]);
    psi.swap(next);
    result.iterations = it;
    if (l1 < 1e-12) break;
  }
  result.psi = Pmf(std::move(psi));
  return result;
}

std::vector<HittingReport> hitting_time_check(const Matrix& phi,
                                              std::size_t excursions,
                                              std::uint64_t seed) {
  check_square_stochastic(phi, "hitting_time_check");
  const std::size_t n = phi.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(phi(i, j) > 0.0))
        throw ConfigError("hitting_time_check: chain must be strictly positive");
  if (excursions < 10000)
    throw ConfigError("hitting_time_check: need at least 10^4 excursions");

  const StationaryResult stat = stationary_distribution(phi);

  std::vector<HittingReport> reports;
  reports.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    Rng rng(derive_seed(seed, s));
    double sum_tau = 0.0, sum_tau_sq = 0.0;
    for (std::size_t e = 0; e < excursions; ++e) {
      std::size_t state = s;
      double tau = 0.0;
      do {
        state = step_chain(phi, state, rng);
        tau += 1.0;
      } while (state != s);
      sum_tau += tau;
      sum_tau_sq += tau * tau;
    }
    const double ne = static_cast<double>(excursions);
    const double mean_tau = sum_tau / ne;
    const double var_tau =
        std::max(0.0, sum_tau_sq / ne - mean_tau * mean_tau) * ne / (ne - 1.0);
    // Delta method: sd(1/mean) = sd(mean) / mean^2.
    const double sigma = std::sqrt(var_tau / ne) / (mean_tau * mean_tau);

    HittingReport r;
    r.state = s;
    r.psi = (*stat.psi)[s];
    r.expected_tau = mean_tau;
    r.inv_expected_tau = 1.0 / mean_tau;
    r.sigma = sigma;
    r.excursions = excursions;
    reports.push_back(r);
  }
  return reports;
}

Pmf chain_occupancy(const Matrix& phi, std::size_t steps, std::size_t start,
                    std::uint64_t seed) {
  check_square_stochastic(phi, "chain_occupancy");
  if (steps == 0) throw ConfigError("chain_occupancy: steps must be >= 1");
  if (start >= phi.rows()) throw ConfigError("chain_occupancy: start outside chain");

  Rng rng(seed);
  std::vector<double> counts(phi.rows(), 0.0);
  std::size_t state = start;
  for (std::size_t t = 0; t < steps; ++t) {
    state = step_chain(phi, state, rng);
    counts[state] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(steps);
  return Pmf(std::move(counts));
}

}  // namespace privic
