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
#include <random>

namespace privic {

// Deterministic random stream used everywhere randomness is needed.
//
// The generator is std::mt19937_64, whose output sequence for a given seed is
// pinned by the C++ standard, so traces reproduce across platforms. Doubles
// are produced with the 53-bit shift mapping (never with the unspecified
// std::uniform_real_distribution), keeping draws bit-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform draw in [0, 1), 53 significant bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

// SplitMix64 finalizer; the standard 64-bit avalanche mix.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic sub-seed for fan-out: cycle seeds, per-trial seeds, worker
// shards. derive_seed(s, i) = splitmix64(s XOR splitmix64(i + 1)), so distinct
// indices give independent-looking streams and the derivation is reproducible
// from (seed, index) alone.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

}  // namespace privic
