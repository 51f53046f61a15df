/*
 * Copyright (c) Contributors to the icevertex project.
 * For complete copyright and license terms please see the LICENSE at the root
 * of this distribution.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef ICEVERTEX_RNG_HPP
#define ICEVERTEX_RNG_HPP

#include <cstdint>
#include <string_view>

namespace icevertex {

/// Deterministic 64-bit generator (SplitMix64). A seed plus a textual label
/// derive an independent stream, so adding one randomized check never
/// perturbs the draws of another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Stream derived from `seed` and `label` (seed XOR FNV-1a64(label)).
  Rng(std::uint64_t seed, std::string_view label)
      : state_(seed ^ fnv1a64(label)) {}

  /// Next raw 64-bit value.
  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1): fixed 53-bit mapping, identical on every
  /// platform.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [-1, 1].
  double uniform_sym() { return 2.0 * uniform01() - 1.0; }

  static std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    return h;
  }

 private:
  std::uint64_t state_;
};

}  // namespace icevertex

#endif  // ICEVERTEX_RNG_HPP
