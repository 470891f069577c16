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

#include "privic/prob.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "privic/errors.hpp"
#include "privic/rng.hpp"

namespace privic {

namespace {

constexpr double kMassTolerance = 1e-9;

// first index i with cdf[i] > u; cdf is nondecreasing with back() ~ 1.
std::size_t cdf_lookup(const std::vector<double>& cdf, double u,
                       std::size_t last_support) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return last_support;  // u fell past rounding-short mass
  return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace

Pmf::Pmf(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw ConfigError("pmf: empty support");
  double sum = 0.0;
  full_support_ = true;
  for (double v : p_) {
    if (!(v >= 0.0)) throw ConfigError("pmf: negative or NaN entry");
    if (v == 0.0) full_support_ = false;
    sum += v;
  }
  if (std::abs(sum - 1.0) > kMassTolerance)
    throw ConfigError("pmf: total mass " + std::to_string(sum) + " is not 1");
}

Pmf Pmf::uniform(std::size_t m) {
  if (m == 0) throw ConfigError("pmf: empty support");
  return Pmf(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

Pmf Pmf::from_weights(const std::vector<double>& weights) {
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0)) throw ConfigError("pmf: negative or NaN weight");
    sum += v;
  }
  if (!(sum > 0.0)) throw ConfigError("pmf: weights have no mass");
  std::vector<double> p(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) p[i] = weights[i] / sum;
  return Pmf(std::move(p));
}

Pmf Pmf::point(std::size_t m, std::size_t at) {
  if (at >= m) throw ConfigError("pmf: point mass outside support");
  std::vector<double> p(m, 0.0);
  p[at] = 1.0;
  return Pmf(std::move(p));
}

Channel::Channel(std::size_t m, std::vector<double> row_major)
    : m_(m), c_(std::move(row_major)) {
  if (m_ == 0) throw ConfigError("channel: empty space");
  if (c_.size() != m_ * m_)
    throw ConfigError("channel: expected " + std::to_string(m_ * m_) +
                      " entries, got " + std::to_string(c_.size()));
  positive_ = true;
  for (std::size_t x = 0; x < m_; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < m_; ++y) {
      double v = c_[x * m_ + y];
      if (!(v >= 0.0)) throw ConfigError("channel: negative or NaN entry");
      if (v == 0.0) positive_ = false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > kMassTolerance)
      throw ConfigError("channel: row " + std::to_string(x) + " sums to " +
                        std::to_string(sum));
  }
}

Channel Channel::uniform(std::size_t m) {
  if (m == 0) throw ConfigError("channel: empty space");
  return Channel(m, std::vector<double>(m * m, 1.0 / static_cast<double>(m)));
}

Channel Channel::identity(std::size_t m) {
  if (m == 0) throw ConfigError("channel: empty space");
  std::vector<double> c(m * m, 0.0);
  for (std::size_t x = 0; x < m; ++x) c[x * m + x] = 1.0;
  return Channel(m, std::move(c));
}

Pmf uniform_pmf(std::size_t m) { return Pmf::uniform(m); }

Channel uniform_channel(std::size_t m) { return Channel::uniform(m); }

SampleSet sample(const Pmf& pmf, std::size_t n, std::uint64_t seed) {
  const std::size_t m = pmf.size();
  std::vector<double> cdf(m);
  double acc = 0.0;
  std::size_t last_support = 0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += pmf[i];
    cdf[i] = acc;
    if (pmf[i] > 0.0) last_support = i;
  }

  Rng rng(seed);
  SampleSet out;
  out.seed = seed;
  out.indices.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.indices[i] = cdf_lookup(cdf, rng.uniform01(), last_support);
  return out;
}

SampleSet obfuscate(const SampleSet& samples, const Channel& channel,
                    std::uint64_t seed) {
  const std::size_t m = channel.size();
  // Row CDFs once, then one lookup per sample.
  std::vector<std::vector<double>> cdf(m);
  std::vector<std::size_t> last_support(m, 0);
  for (std::size_t x = 0; x < m; ++x) {
    cdf[x].resize(m);
    double acc = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
      acc += channel(x, y);
      cdf[x][y] = acc;
      if (channel(x, y) > 0.0) last_support[x] = y;
    }
  }

  Rng rng(seed);
  SampleSet out;
  out.seed = seed;
  out.indices.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::size_t x = samples.indices[i];
    if (x >= m) throw ConfigError("obfuscate: sample index outside channel space");
    out.indices[i] = cdf_lookup(cdf[x], rng.uniform01(), last_support[x]);
  }
  return out;
}

Pmf push_forward(const Pmf& prior, const Channel& channel) {
  const std::size_t m = channel.size();
  if (prior.size() != m)
    throw ConfigError("push_forward: prior/channel size mismatch");
  std::vector<double> out(m, 0.0);
  for (std::size_t x = 0; x < m; ++x) {
    const double px = prior[x];
    if (px == 0.0) continue;
    const double* row = channel.row(x);
    for (std::size_t y = 0; y < m; ++y) out[y] += px * row[y];
  }
  return Pmf(std::move(out));
}

}  // namespace privic
