/*
Copyright 2026 The baptista Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <string>

namespace baptista {

// Every pseudo-random quantity in the library (association shuffle, eta
// candidate draws, orbit perturbation, Monte Carlo trials) comes from
// splitmix64 streams. The generator is pure integer arithmetic, so results
// are bit-identical across platforms, and the counter form makes any draw a
// pure function of (seed, index) with no hidden state to serialize.

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Draw `index` of the splitmix64 stream keyed by `seed`.
constexpr std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  return splitmix64_mix(seed + (index + 1) * kSplitMix64Gamma);
}

/// Sequential splitmix64 stream.
class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += kSplitMix64Gamma;
    return splitmix64_mix(state_);
  }

 private:
  std::uint64_t state_;
};

/// Map a 64-bit draw to a double in [0, 1) with 53 uniform bits.
constexpr double to_unit_double(std::uint64_t r) {
  return static_cast<double>(r >> 11) * 0x1p-53;
}

/// Uniform draw from [0, bound) by rejection, so no modulo bias.
inline std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
  std::uint64_t r;
  do {
    r = rng.next();
  } while (r >= limit);
  return r % bound;
}

/// 128-bit seed value, serialized as 32 lowercase hex digits (high half first).
struct Seed128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend bool operator==(const Seed128&, const Seed128&) = default;
};

std::string format_seed128(const Seed128& seed);
Seed128 parse_seed128(const std::string& hex);  // throws KeyFormatError

// Domain tags keep the independent streams derived from one secret apart.
enum class RngDomain : std::uint64_t {
  Association = 0x6173736F63696174ull,  // "associat"
  Kappa = 0x6B617070612E2E2Eull,        // "kappa..."
  MonteCarlo = 0x6D6F6E74656361ull,
  Keygen = 0x6B657967656Eull,
  Perturb = 0x70657274757262ull,
};

/// Collapse a 128-bit seed and a domain tag into one stream seed.
constexpr std::uint64_t domain_seed(const Seed128& seed, RngDomain domain) {
  return splitmix64_mix(seed.lo ^ splitmix64_mix(seed.hi ^ static_cast<std::uint64_t>(domain)));
}

}  // namespace baptista
