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

#include "privic/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "privic/errors.hpp"
#include "privic/mechanisms.hpp"

namespace privic {

namespace {

// sum_y q(y) ln((theta C)(y)); -inf when a positive-frequency report is
// impossible under theta.
double report_loglik(const std::vector<double>& theta, const Channel& channel,
                     const Pmf& q) {
  const std::size_t m = channel.size();
  double ll = 0.0;
  for (std::size_t y = 0; y < m; ++y) {
    if (q[y] == 0.0) continue;
    double py = 0.0;
    for (std::size_t z = 0; z < m; ++z) py += theta[z] * channel(z, y);
    if (py <= 0.0) return -std::numeric_limits<double>::infinity();
    ll += q[y] * std::log(py);
  }
  return ll;
}

}  // namespace

Pmf empirical_pmf(const SampleSet& samples, std::size_t m) {
  if (samples.size() == 0) throw ConfigError("empirical_pmf: no samples");
  std::vector<double> counts(m, 0.0);
  for (std::size_t idx : samples.indices) {
    if (idx >= m)
      throw ConfigError("empirical_pmf: sample index " + std::to_string(idx) +
                        " outside space of size " + std::to_string(m));
    counts[idx] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  for (double& c : counts) c /= n;
  return Pmf(std::move(counts));
}

IbuConfig IbuConfig::fixed(std::size_t iters) {
  IbuConfig cfg;
  cfg.max_iters = iters;
  cfg.tol = std::numeric_limits<double>::min();
  return cfg;
}

Pmf ibu_step(const Pmf& theta, const Channel& channel, const Pmf& q) {
  const std::size_t m = channel.size();
  if (theta.size() != m || q.size() != m)
    throw ConfigError("ibu_step: size mismatch");

  std::vector<double> next(m, 0.0);
  for (std::size_t y = 0; y < m; ++y) {
    const double qy = q[y];
    if (qy == 0.0) continue;  // unobserved reports contribute nothing
    double denom = 0.0;
    for (std::size_t z = 0; z < m; ++z) denom += theta[z] * channel(z, y);
    if (denom <= 0.0)
      throw ConfigError("ibu_step: observed report " + std::to_string(y) +
                        " impossible under the current estimate");
    const double scale = qy / denom;
    for (std::size_t x = 0; x < m; ++x) next[x] += scale * theta[x] * channel(x, y);
  }
  return Pmf(std::move(next));
}

IbuResult ibu_run(const Pmf& theta0, const Channel& channel, const Pmf& q,
                  const IbuConfig& cfg) {
  if (cfg.max_iters == 0) throw ConfigError("ibu_run: max_iters must be >= 1");
  if (!(cfg.tol > 0.0)) throw ConfigError("ibu_run: tol must be > 0");

  IbuResult result{theta0, 0, false, {}, std::nullopt};
  if (cfg.record_trajectory) result.trajectory.emplace().push_back(theta0);

  Pmf current = theta0;
  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    Pmf next = ibu_step(current, channel, q);
    double l1 = 0.0;
    for (std::size_t x = 0; x < next.size(); ++x)
      l1 += std::abs(next[x] - current[x]);
    current = std::move(next);
    result.iterations_used = it;
    result.loglik_trajectory.push_back(report_loglik(current.values(), channel, q));
    if (result.trajectory) result.trajectory->push_back(current);
    if (l1 < cfg.tol) {
      result.converged = true;
      break;
    }
  }
  result.estimate = std::move(current);
  return result;
}

namespace {

// Simplex grid pitch: 1e-3 is affordable through m = 3; beyond that the node
// count explodes combinatorially, so the pitch widens and the concave
// refinement stage carries the precision instead.
std::size_t grid_steps_for(std::size_t m) {
  switch (m) {
    case 1:
    case 2:
    case 3:
      return 1000;
    case 4:
      return 60;
    case 5:
      return 32;
    default:
      return 22;
  }
}

// Maximize the concave g on [lo, hi] by golden-section; returns argmax.
template <typename F>
double golden_section_max(F&& g, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double g1 = g(x1), g2 = g(x2);
  while (b - a > 1e-12) {
    if (g1 < g2) {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + kInvPhi * (b - a);
      g2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - kInvPhi * (b - a);
      g1 = g(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

MleResult mle_oracle(const Channel& channel, const Pmf& q) {
  const std::size_t m = channel.size();
  if (q.size() != m) throw ConfigError("mle_oracle: size mismatch");
  if (m > 6)
    throw CapabilityError("mle_oracle: exhaustive search supports m <= 6, got " +
                          std::to_string(m));

  const std::size_t k = grid_steps_for(m);
  const double pitch = 1.0 / static_cast<double>(k);

  // Exhaustive sweep over compositions of k into m nonnegative parts, in
  // ascending lexicographic order so the first optimum found is the
  // lexicographically smallest.
  std::vector<std::size_t> comp(m, 0);
  comp[m - 1] = k;
  std::vector<double> theta(m), best_theta(m);
  double best_ll = -std::numeric_limits<double>::infinity();
  bool tie_at_best = false;
  for (;;) {
    for (std::size_t i = 0; i < m; ++i)
      theta[i] = static_cast<double>(comp[i]) * pitch;
    const double ll = report_loglik(theta, channel, q);
    if (ll > best_ll + 1e-12) {
      best_ll = ll;
      best_theta = theta;
      tie_at_best = false;
    } else if (ll > best_ll - 1e-12 && std::isfinite(ll)) {
      tie_at_best = true;
    }

    // next composition: pull one unit from the tail into the lowest slot
    // that can take it (standard revolving-door enumeration).
    std::size_t j = m - 1;
    while (j > 0 && comp[j] == 0) --j;
    if (j == 0) break;  // (k, 0, ..., 0) is the lexicographic maximum
    const std::size_t moved = comp[j];
    comp[j] = 0;
    comp[m - 1] = moved - 1;
    ++comp[j - 1];
  }

  if (!std::isfinite(best_ll))
    throw ConfigError("mle_oracle: observed reports impossible under the channel");

  // Refinement: golden-section line searches along pairwise mass transfers
  // theta + t*(e_i - e_j). Concavity of the likelihood makes these sweeps
  // converge to the global maximizer.
  std::vector<double> refined = best_theta;
  double refined_ll = best_ll;
  for (std::size_t pass = 0; pass < 200; ++pass) {
    double gain = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        auto g = [&](double t) {
          std::vector<double> cand = refined;
          cand[i] += t;
          cand[j] -= t;
          return report_loglik(cand, channel, q);
        };
        const double t = golden_section_max(g, -refined[i], refined[j]);
        const double ll = g(t);
        if (ll > refined_ll) {
          gain += ll - refined_ll;
          refined_ll = ll;
          refined[i] += t;
          refined[j] -= t;
        }
      }
    }
    if (gain < 1e-14) break;
  }
  for (double& v : refined)
    if (v < 0.0) v = 0.0;  // golden-section endpoints can leave -1e-17 dust

  // Flat top (constant likelihood in some direction) means the maximizer is
  // not unique; probe the refined point along every transfer direction.
  bool flat = tie_at_best;
  if (flat) {
    const double h = 1e-3;
    bool all_flat = true;
    for (std::size_t i = 0; i < m && all_flat; ++i) {
      for (std::size_t j = 0; j < m && all_flat; ++j) {
        if (i == j) continue;
        const double t = std::min(h, refined[j]);
        if (t <= 0.0) continue;
        std::vector<double> cand = refined;
        cand[i] += t;
        cand[j] -= t;
        if (std::abs(report_loglik(cand, channel, q) - refined_ll) > 1e-11)
          all_flat = false;
      }
    }
    flat = all_flat;
  }

  if (flat)
    return {Pmf::from_weights(best_theta), pitch, false};
  return {Pmf::from_weights(refined), pitch, true};
}

DualityTrace duality_trace(const Pmf& prior, double beta, const Matrix& dist,
                           std::size_t steps) {
  const std::size_t m = prior.size();
  if (dist.rows() != m || dist.cols() != m)
    throw ConfigError("duality_trace: size mismatch");
  if (!prior.full_support())
    throw ConfigError("duality_trace: prior must have full support");

  DualityTrace trace;
  trace.ba_marginals.reserve(steps + 1);
  trace.ibu_estimates.reserve(steps + 1);
  trace.l1_gaps.reserve(steps + 1);

  // (a) genuine BA iterates, tracked through the channel.
  Channel ba_channel = Channel::uniform(m);
  trace.ba_marginals.push_back(push_forward(prior, ba_channel));

  // (b) the Bayesian-update recursion on the raw symmetric kernel, roles of
  // true/reported swapped and `prior` as the observed frequencies.
  Matrix kernel(m, m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      kernel(x, y) = std::exp(-beta * dist(x, y));
  std::vector<double> theta(m, 1.0 / static_cast<double>(m));
  trace.ibu_estimates.push_back(Pmf(theta));

  for (std::size_t t = 1; t <= steps; ++t) {
    ba_channel = ba_step(prior, ba_channel, beta, dist);
    trace.ba_marginals.push_back(push_forward(prior, ba_channel));

    std::vector<double> next(m, 0.0);
    for (std::size_t y = 0; y < m; ++y) {
      double denom = 0.0;
      for (std::size_t z = 0; z < m; ++z) denom += theta[z] * kernel(z, y);
      const double scale = prior[y] / denom;
      for (std::size_t x = 0; x < m; ++x) next[x] += scale * theta[x] * kernel(x, y);
    }
    theta = std::move(next);
    trace.ibu_estimates.push_back(Pmf(theta));
  }

  for (std::size_t t = 0; t < trace.ba_marginals.size(); ++t) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      l1 += std::abs(trace.ba_marginals[t][i] - trace.ibu_estimates[t][i]);
    trace.l1_gaps.push_back(l1);
  }
  return trace;
}

}  // namespace privic
