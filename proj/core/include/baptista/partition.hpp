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
#include <vector>

#include "baptista/chaos.hpp"
#include "baptista/rng.hpp"

namespace baptista {

using Symbol = std::uint16_t;

/// Sentinel returned by Partition::symbol_at for states outside the visiting
/// interval. Distinct from every alphabet symbol (alphabets top out at 2^16).
inline constexpr std::uint32_t kBeta = 0xFFFFFFFFu;

/// Seed-keyed Fisher-Yates shuffle of 0..s-1. Equal seeds give equal
/// permutations; the shuffle uses rejection sampling, so every permutation
/// is reachable without modulo bias.
std::vector<Symbol> derive_association(const Seed128& seed, std::uint32_t s);

/// The visiting interval [x_min, x_max) cut into s half-open cells of width
/// epsilon, plus the secret cell-to-symbol bijection.
struct Partition {
  double x_min = 0.0;
  double x_max = 1.0;
  std::uint32_t s = 256;
  double epsilon = 1.0 / 256.0;
  std::vector<Symbol> association;  // cell index -> symbol

  static Partition make(double x_min, double x_max, std::uint32_t s,
                        const Seed128& assoc_seed);

  /// Raw cell index for x, or kBeta when x lies outside [x_min, x_max).
  std::uint32_t cell_of(double x) const {
    if (x < x_min || x >= x_max) return kBeta;
    auto idx = static_cast<std::uint32_t>((x - x_min) / epsilon);
    // Rounding in the division can push a value just under x_max to s;
    // the real-arithmetic cells are exact but doubles are not.
    if (idx >= s) idx = s - 1;
    return idx;
  }

  /// The extended association: symbol for in-range x, kBeta otherwise.
  std::uint32_t symbol_at(double x) const {
    const std::uint32_t idx = cell_of(x);
    return idx == kBeta ? kBeta : association[idx];
  }

  double cell_lower(std::uint32_t idx) const { return x_min + idx * epsilon; }
  double cell_midpoint(std::uint32_t idx) const {
    return x_min + (idx + 0.5) * epsilon;
  }
};

struct VisitingInterval {
  double lo;
  double hi;
};

/// Default X' per map family. The tent and piecewise maps have uniform
/// invariant density, so a wide interval keeps out-of-range states rare but
/// nonzero; the logistic density piles up at the edges, so X' backs away
/// from them.
VisitingInterval default_visiting_interval(MapKind kind);

}  // namespace baptista
