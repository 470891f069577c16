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

#include "privic/metrics.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <vector>

#include "privic/errors.hpp"

namespace privic {

double mutual_information(const Pmf& prior, const Channel& channel) {
  const std::size_t m = channel.size();
  if (prior.size() != m)
    throw ConfigError("mutual_information: prior/channel size mismatch");
  const Pmf out = push_forward(prior, channel);

  double mi = 0.0;
  for (std::size_t x = 0; x < m; ++x) {
    const double px = prior[x];
    if (px == 0.0) continue;
    const double* row = channel.row(x);
    for (std::size_t y = 0; y < m; ++y) {
      const double cxy = row[y];
      if (cxy == 0.0) continue;  // 0*ln(0/q) = 0
      mi += px * cxy * std::log(cxy / out[y]);
    }
  }
  // Nonnegative by Gibbs' inequality; sweep away rounding dust.
  return mi < 0.0 ? 0.0 : mi;
}

double avg_distortion(const Pmf& prior, const Channel& channel,
                      const Matrix& dist) {
  const std::size_t m = channel.size();
  if (prior.size() != m || dist.rows() != m || dist.cols() != m)
    throw ConfigError("avg_distortion: size mismatch");
  double total = 0.0;
  for (std::size_t x = 0; x < m; ++x) {
    const double px = prior[x];
    if (px == 0.0) continue;
    const double* row = channel.row(x);
    const double* drow = dist.row(x);
    double acc = 0.0;
    for (std::size_t y = 0; y < m; ++y) acc += row[y] * drow[y];
    total += px * acc;
  }
  return total;
}

double tv_distance(const Pmf& p1, const Pmf& p2) {
  if (p1.size() != p2.size()) throw ConfigError("tv_distance: size mismatch");
  double l1 = 0.0;
  for (std::size_t i = 0; i < p1.size(); ++i) l1 += std::abs(p1[i] - p2[i]);
  return 0.5 * l1;
}

namespace {

constexpr double kLeftoverMass = 1e-12;   // stop augmenting below this
constexpr double kNodeActive = 1e-15;     // a node with less is saturated

// Exact min-cost transportation by successive shortest augmenting paths with
// Johnson potentials. Nodes 0..m-1 are sources, m..2m-1 sinks; every
// source-sink pair is an arc of cost dist(i,j), and an arc carrying flow
// offers its reverse at cost -dist(i,j). Potentials keep all residual reduced
// costs nonnegative so plain Dijkstra applies; each phase augments along one
// shortest path until the supplies are exhausted.
class TransportSolver {
 public:
  TransportSolver(const std::vector<double>& supply,
                  const std::vector<double>& demand, const Matrix& dist)
      : m_(supply.size()),
        dist_(dist),
        rem_supply_(supply),
        rem_demand_(demand),
        u_(m_, 0.0),
        v_(m_, 0.0),
        flow_(m_, m_, 0.0) {}

  Matrix solve() {
    double remaining = 0.0;
    for (double s : rem_supply_) remaining += s;
    // Every augmentation saturates a node or drains an arc; this is a
    // generous cap that only a logic bug could hit.
    std::size_t phase_budget = 8 * m_ * m_ + 64;
    while (remaining > kLeftoverMass) {
      if (phase_budget-- == 0)
        throw std::logic_error("emd: augmentation did not terminate");
      remaining -= augment_once();
    }
    return std::move(flow_);
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  // One Dijkstra phase + augmentation; returns the mass moved.
  double augment_once() {
    const std::size_t n = 2 * m_;
    std::vector<double> d(n, kInf);
    std::vector<std::size_t> parent(n, n);
    std::vector<char> done(n, 0);
    for (std::size_t i = 0; i < m_; ++i)
      if (rem_supply_[i] > kNodeActive) d[i] = 0.0;

    for (;;) {
      std::size_t best = n;
      double best_d = kInf;
      for (std::size_t k = 0; k < n; ++k)
        if (!done[k] && d[k] < best_d) {
          best_d = d[k];
          best = k;
        }
      if (best == n) break;  // nothing reachable remains
      done[best] = 1;
      if (best < m_) {
        const std::size_t i = best;
        const double* drow = dist_.row(i);
        for (std::size_t j = 0; j < m_; ++j) {
          const std::size_t node = m_ + j;
          if (done[node]) continue;
          double rc = drow[j] + u_[i] - v_[j];
          if (rc < 0.0) rc = 0.0;  // rounding dust
          if (d[i] + rc < d[node]) {
            d[node] = d[i] + rc;
            parent[node] = i;
          }
        }
      } else {
        const std::size_t j = best - m_;
        for (std::size_t i = 0; i < m_; ++i) {
          if (done[i] || flow_(i, j) <= kNodeActive) continue;
          double rc = -dist_(i, j) + v_[j] - u_[i];
          if (rc < 0.0) rc = 0.0;
          if (d[best] + rc < d[i]) {
            d[i] = d[best] + rc;
            parent[i] = best;
          }
        }
      }
    }

    std::size_t target = n;
    double target_d = kInf;
    for (std::size_t j = 0; j < m_; ++j)
      if (rem_demand_[j] > kNodeActive && d[m_ + j] < target_d) {
        target_d = d[m_ + j];
        target = m_ + j;
      }
    if (target == n)
      throw std::logic_error("emd: no augmenting path (unbalanced inputs?)");

    for (std::size_t k = 0; k < n; ++k) {
      const double shift = d[k] < target_d ? d[k] : target_d;
      if (k < m_)
        u_[k] += shift;
      else
        v_[k - m_] += shift;
    }

    // Walk the parent chain once for the bottleneck. A reverse arc
    // (sink -> source) can only carry the flow already on it.
    std::size_t start = target;
    double delta = rem_demand_[target - m_];
    for (std::size_t node = target; parent[node] != n; node = parent[node]) {
      const std::size_t prev = parent[node];
      if (prev >= m_) {
        const double f = flow_(node, prev - m_);
        if (f < delta) delta = f;
      }
      start = prev;
    }
    if (rem_supply_[start] < delta) delta = rem_supply_[start];

    for (std::size_t node = target; parent[node] != n; node = parent[node]) {
      const std::size_t prev = parent[node];
      if (prev < m_)
        flow_(prev, node - m_) += delta;  // forward arc source -> sink
      else
        flow_(node, prev - m_) -= delta;  // reverse arc undoes earlier flow
    }
    rem_supply_[start] -= delta;
    rem_demand_[target - m_] -= delta;
    return delta;
  }

  std::size_t m_;
  const Matrix& dist_;
  std::vector<double> rem_supply_;
  std::vector<double> rem_demand_;
  std::vector<double> u_;
  std::vector<double> v_;
  Matrix flow_;
};

std::vector<double> normalized_mass(const Pmf& p, const char* side) {
  std::vector<double> out = p.values();
  double sum = 0.0;
  for (double x : out) sum += x;
  if (std::abs(sum - 1.0) > 1e-9)
    std::cerr << "emd: " << side << " mass " << sum
              << " differs from 1; renormalizing\n";
  for (double& x : out) x /= sum;
  return out;
}

}  // namespace

TransportPlan emd(const Pmf& from, const Pmf& to, const Matrix& dist) {
  const std::size_t m = from.size();
  if (to.size() != m || dist.rows() != m || dist.cols() != m)
    throw ConfigError("emd: size mismatch");

  TransportSolver solver(normalized_mass(from, "source"),
                         normalized_mass(to, "target"), dist);
  TransportPlan result;
  result.plan = solver.solve();
  double cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* frow = result.plan.row(i);
    const double* drow = dist.row(i);
    for (std::size_t j = 0; j < m; ++j) cost += frow[j] * drow[j];
  }
  result.cost = cost;
  return result;
}

double emd_cost(const Pmf& from, const Pmf& to, const Matrix& dist) {
  return emd(from, to, dist).cost;
}

double statistical_utility(const Pmf& estimate, const Pmf& truth,
                           const Matrix& dist) {
  return emd_cost(estimate, truth, dist);
}

}  // namespace privic
