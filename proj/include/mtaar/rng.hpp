// SPDX-License-Identifier: Apache-2.0
//
// Seedable deterministic RNG for test-problem generation.
//
// Engine: xoshiro256++ (Blackman & Vigna). The 256-bit state is expanded
// from the 64-bit seed with splitmix64. next() returns
//   rotl(s0 + s3, 23) + s0
// followed by the standard xoshiro256 state transition. Doubles come from
// the top 53 bits: (next() >> 11) * 2^-53, uniform on [0,1); the open
// interval (0,1) redraws on exact zero. Identical seeds yield identical
// streams on every platform, which the generators rely on for
// bit-reproducible instances.

#pragma once

#include <cstdint>

namespace mtaar {

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& word : s_) {
      z += 0x9e3779b97f4a7c15ULL;
      std::uint64_t x = z;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      word = x ^ (x >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open01() {
    double u = uniform01();
    while (u == 0.0) u = uniform01();
    return u;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

}  // namespace mtaar
