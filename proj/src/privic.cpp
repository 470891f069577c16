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

#include "privic/privic.hpp"

#include <string>

#include "privic/errors.hpp"
#include "privic/metrics.hpp"
#include "privic/rng.hpp"

namespace privic {

TruthSampler::TruthSampler(Pmf dist, std::optional<SampleSet> data)
    : dist_(std::move(dist)), data_(std::move(data)) {}

TruthSampler TruthSampler::from_pmf(Pmf pmf) {
  return TruthSampler(std::move(pmf), std::nullopt);
}

TruthSampler TruthSampler::from_samples(SampleSet data, std::size_t m) {
  if (data.size() == 0) throw DataError("truth sampler: empty dataset");
  for (std::size_t idx : data.indices)
    if (idx >= m)
      throw DataError("truth sampler: dataset index " + std::to_string(idx) +
                      " outside space of size " + std::to_string(m));
  Pmf freq = [&] {
    std::vector<double> counts(m, 0.0);
    for (std::size_t idx : data.indices) counts[idx] += 1.0;
    const double n = static_cast<double>(data.size());
    for (double& c : counts) c /= n;
    return Pmf(std::move(counts));
  }();
  return TruthSampler(std::move(freq), std::move(data));
}

SampleSet TruthSampler::draw(std::size_t n, std::uint64_t seed) const {
  if (!data_) return sample(dist_, n, seed);
  // Bootstrap: n uniform picks (with replacement) from the fixed dataset.
  Rng rng(seed);
  const std::size_t size = data_->size();
  SampleSet out;
  out.seed = seed;
  out.indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t pick = static_cast<std::size_t>(rng.uniform01() *
                                                static_cast<double>(size));
    if (pick >= size) pick = size - 1;
    out.indices[i] = data_->indices[pick];
  }
  return out;
}

std::pair<Pmf, CycleRecord> privic_cycle(const Pmf& theta_prev,
                                         const TruthSampler& truth,
                                         const PrivicConfig& cfg,
                                         const Matrix& dist,
                                         std::uint64_t cycle_seed) {
  const std::size_t m = theta_prev.size();
  if (truth.space_size() != m || dist.rows() != m || dist.cols() != m)
    throw ConfigError("privic_cycle: size mismatch");
  if (cfg.n_per_cycle == 0) throw ConfigError("privic_cycle: n_per_cycle must be >= 1");

  BaConfig ba_cfg = cfg.ba;
  ba_cfg.beta = cfg.beta;

  // The channel is re-synthesized from scratch (uniform start) against the
  // current belief; carrying the previous channel over would change which
  // fixed point BA lands on.
  BaResult ba = ba_run(theta_prev, Channel::uniform(m), ba_cfg, dist);

  CycleRecord record;
  record.beta = cfg.beta;
  record.epsilon_audit = verify_geo_ind(ba.channel, dist);
  record.avg_distortion = ba.avg_distortion;
  record.mi = ba.mi;
  record.ba_iterations = ba.iterations_used;
  record.ba_converged = ba.converged;
  record.draw_seed = derive_seed(cycle_seed, 0);
  record.obfuscate_seed = derive_seed(cycle_seed, 1);

  const SampleSet true_batch = truth.draw(cfg.n_per_cycle, record.draw_seed);
  const SampleSet noisy = obfuscate(true_batch, ba.channel, record.obfuscate_seed);
  const Pmf q = empirical_pmf(noisy, m);

  IbuResult ibu = ibu_run(theta_prev, ba.channel, q, cfg.ibu);
  record.ibu_iterations = ibu.iterations_used;
  record.ibu_converged = ibu.converged;
  record.estimate = ibu.estimate;
  return {std::move(ibu.estimate), std::move(record)};
}

PrivicTrace privic_run(const Pmf& theta0, const TruthSampler& truth,
                       const PrivicConfig& cfg, const Matrix& dist,
                       const std::optional<Pmf>& reference_truth) {
  if (cfg.cycles == 0) throw ConfigError("privic_run: cycles must be >= 1");

  PrivicTrace trace;
  trace.cycles.reserve(cfg.cycles);
  Pmf theta = theta0;
  for (std::size_t t = 1; t <= cfg.cycles; ++t) {
    std::optional<double> emd_entering;
    if (reference_truth)
      emd_entering = statistical_utility(theta, *reference_truth, dist);

    auto [next, record] = privic_cycle(theta, truth, cfg, dist,
                                       derive_seed(cfg.seed, t));
    record.cycle = t;
    record.emd_to_truth = emd_entering;
    trace.cycles.push_back(std::move(record));
    theta = std::move(next);
  }
  return trace;
}

}  // namespace privic
