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
#include <utility>
#include <vector>

#include "privic/estimation.hpp"
#include "privic/matrix.hpp"
#include "privic/mechanisms.hpp"
#include "privic/prob.hpp"

namespace privic {

// Where true locations come from. The pipeline only ever asks for batches of
// draws, so both a known synthetic distribution and a fixed ingested dataset
// (bootstrap-resampled each cycle) fit behind the same black box.
class TruthSampler {
 public:
  static TruthSampler from_pmf(Pmf pmf);
  // `m` is the grid size; indices must lie inside it.
  static TruthSampler from_samples(SampleSet data, std::size_t m);

  SampleSet draw(std::size_t n, std::uint64_t seed) const;
  // The sampled distribution itself: the pmf, or the dataset's frequencies.
  const Pmf& distribution() const { return dist_; }
  std::size_t space_size() const { return dist_.size(); }

 private:
  TruthSampler(Pmf dist, std::optional<SampleSet> data);

  Pmf dist_;
  std::optional<SampleSet> data_;  // present: bootstrap the fixed dataset
};

struct PrivicConfig {
  double beta = 1.0;
  std::size_t cycles = 1;
  std::size_t n_per_cycle = 10000;
  BaConfig ba;
  IbuConfig ibu;
  std::uint64_t seed = 0;
};

// What one collection cycle did. `estimate` is the posterior estimate after
// the cycle's Bayesian updates; `emd_to_truth` measures the estimate the
// cycle *started* from (so cycle 1 reports the untrained initial estimate,
// which is deterministic), matching how per-cycle utility tables are laid out.
struct CycleRecord {
  std::size_t cycle = 0;
  double beta = 0.0;
  double epsilon_audit = 0.0;   // tightest geo-ind level of this cycle's channel
  double avg_distortion = 0.0;  // achieved E[d] of the channel, km
  double mi = 0.0;              // achieved leakage of the channel, nats
  std::size_t ba_iterations = 0;
  bool ba_converged = false;
  std::size_t ibu_iterations = 0;
  bool ibu_converged = false;
  std::uint64_t draw_seed = 0;
  std::uint64_t obfuscate_seed = 0;
  Pmf estimate{std::vector<double>{1.0}};
  std::optional<double> emd_to_truth;  // set when the true distribution is known
};

// One data-collection cycle: synthesize the channel for the current belief
// with Blahut-Arimoto restarted from the uniform channel, draw n fresh true
// samples, obfuscate them, and refine the belief with iterative Bayesian
// updates on the noisy frequencies. Sub-seeds for drawing and obfuscating are
// derived deterministically from cycle_seed.
std::pair<Pmf, CycleRecord> privic_cycle(const Pmf& theta_prev,
                                         const TruthSampler& truth,
                                         const PrivicConfig& cfg,
                                         const Matrix& dist,
                                         std::uint64_t cycle_seed);

struct PrivicTrace {
  std::vector<CycleRecord> cycles;
};

// Runs cfg.cycles chained cycles from theta0, seeding cycle t with
// derive_seed(cfg.seed, t). When `reference_truth` is given, each record
// carries the earth mover's distance between the estimate entering the cycle
// and that reference.
PrivicTrace privic_run(const Pmf& theta0, const TruthSampler& truth,
                       const PrivicConfig& cfg, const Matrix& dist,
                       const std::optional<Pmf>& reference_truth = std::nullopt);

}  // namespace privic
