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

namespace privic {

// Probability mass function over {0, ..., m-1}.
//
// Validated at construction: entries nonnegative, total mass 1 within 1e-9.
// Nothing downstream renormalizes silently; if weights need normalizing, say
// so explicitly with from_weights().
class Pmf {
 public:
  explicit Pmf(std::vector<double> probs);

  static Pmf uniform(std::size_t m);
  // Normalizes nonnegative weights with positive total mass.
  static Pmf from_weights(const std::vector<double>& weights);
  // Point mass at index `at`.
  static Pmf point(std::size_t m, std::size_t at);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }
  // True when every entry is strictly positive.
  bool full_support() const { return full_support_; }

 private:
  std::vector<double> p_;
  bool full_support_;
};

// Row-stochastic m-by-m conditional distribution C[x][y] = P(report y | true x).
// Validated at construction: entries nonnegative, every row sums to 1 within 1e-9.
class Channel {
 public:
  Channel(std::size_t m, std::vector<double> row_major);

  static Channel uniform(std::size_t m);
  static Channel identity(std::size_t m);

  std::size_t size() const { return m_; }
  double operator()(std::size_t x, std::size_t y) const { return c_[x * m_ + y]; }
  const double* row(std::size_t x) const { return c_.data() + x * m_; }
  const std::vector<double>& values() const { return c_; }
  // True when every entry is strictly positive.
  bool positive() const { return positive_; }

 private:
  std::size_t m_;
  std::vector<double> c_;
  bool positive_;
};

// A batch of draws from {0, ..., m-1}. `seed` records the RNG seed that
// produced them; absent for data ingested from files.
struct SampleSet {
  std::vector<std::size_t> indices;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return indices.size(); }
};

Pmf uniform_pmf(std::size_t m);
Channel uniform_channel(std::size_t m);

// n i.i.d. draws by inverse-CDF lookup on the deterministic stream for `seed`.
SampleSet sample(const Pmf& pmf, std::size_t n, std::uint64_t seed);

// Pushes every sample through the channel independently: sample i with value x
// is replaced by one draw from row x. Order preserved; fresh stream for `seed`.
SampleSet obfuscate(const SampleSet& samples, const Channel& channel,
                    std::uint64_t seed);

// Output distribution of `channel` under `prior`: out[y] = sum_x prior[x]*C[x][y].
Pmf push_forward(const Pmf& prior, const Channel& channel);

}  // namespace privic
