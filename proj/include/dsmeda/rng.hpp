// Copyright 2026 The dsmeda Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace dsmeda {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream. The engine is std::mt19937_64 (bit-exact by
/// the standard) and all draws below avoid std::*_distribution, whose output
/// is implementation-defined; identical seeds therefore produce identical
/// sequences on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform on [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on {0, ..., bound-1}, unbiased via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("rng: bound must be > 0");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  int next_index(int bound) {
    return static_cast<int>(next_below(static_cast<std::uint64_t>(bound)));
  }

  /// Independent child stream for a concurrent lane:
  /// child_seed = splitmix64(parent_seed XOR (stream_id+1)*0x9E3779B97F4A7C15).
  /// Depends only on the parent's seed, not on how much it has consumed, so
  /// results are independent of lane count.
  RngStream derive(std::uint64_t stream_id) const {
    return RngStream(
        splitmix64(seed_ ^ ((stream_id + 1) * 0x9E3779B97F4A7C15ULL)));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dsmeda
