// Copyright 2026 The Stockfire Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace stockfire {

// Deterministic random plumbing. Everything here is fully specified so that
// identical seeds give bit-identical streams on any conforming platform:
// std::mt19937_64 semantics are pinned by the standard, and the samplers
// below avoid std::*_distribution (whose algorithms are implementation
// defined).

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Per-trial seed: seed_i = splitmix64(master + (i+1) * golden_gamma).
/// Pure function of (master_seed, trial_index), so trials can be generated
/// in any order or on any thread with the same result.
inline std::uint64_t trial_seed(std::uint64_t master_seed,
                                std::uint64_t trial_index) {
  return splitmix64(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ull);
}

/// Seeded generator with reproducible samplers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Exponential with the given mean via inversion. uniform01() < 1, so the
  /// log argument stays positive.
  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stockfire
