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
#include <stdexcept>
#include <vector>

#include "baptista/rng.hpp"

namespace baptista {

// One-dimensional chaotic maps on the defining interval [0, 1].
//
// Both cipher ends must reproduce the exact same float64 orbit, so the map
// kernels fix the evaluation order per branch and the build forbids FMA
// contraction (see core/CMakeLists.txt). Changing an expression here is a
// wire-format break.

enum class MapKind : std::uint8_t { Logistic, SkewTent, Pwlcm };

/// One linear branch of an onto piecewise-linear map. The branch covers
/// [previous hi, hi) and maps it onto the whole of [0, 1]; `ascending`
/// selects the orientation (false: hi-side maps to 0).
struct PwlcmBranch {
  double hi = 1.0;
  bool ascending = true;

  friend bool operator==(const PwlcmBranch&, const PwlcmBranch&) = default;
};

struct MapSpec {
  MapKind kind = MapKind::SkewTent;
  double b = 4.0;    // logistic control parameter, 3.5699 < b <= 4
  double p = 0.5;    // skew tent apex, 0 < p < 1
  std::vector<PwlcmBranch> branches;  // general PWLCM only

  static MapSpec logistic(double b);
  static MapSpec skew_tent(double p);
  static MapSpec pwlcm(std::vector<PwlcmBranch> branches);

  /// Throws std::invalid_argument on parameters outside the chaotic regime
  /// or a branch list that is not an onto partition of [0, 1].
  void validate() const;

  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

/// Periodic pseudo-random orbit perturbation, the standard countermeasure
/// against dynamical degradation of digital chaos.
struct PerturbConfig {
  bool enabled = true;
  std::uint32_t delta = 16;          // perturb every delta-th iteration
  std::uint64_t prng_seed = 0;
  std::uint32_t magnitude_bits = 8;  // displacement < 2^(magnitude_bits-52)

  void validate() const;

  friend bool operator==(const PerturbConfig&, const PerturbConfig&) = default;
};

struct OrbitState {
  double x = 0.5;
  std::uint64_t total_iters = 0;
  std::uint32_t perturb_countdown = 16;

  friend bool operator==(const OrbitState&, const OrbitState&) = default;
};

inline OrbitState initial_state(double x0, const PerturbConfig& perturb) {
  return OrbitState{x0, 0, perturb.delta};
}

/// One application of F, no perturbation, no counter bookkeeping.
inline double map_step(const MapSpec& map, double x) {
  switch (map.kind) {
    case MapKind::Logistic:
      return map.b * (x * (1.0 - x));
    case MapKind::SkewTent:
      // x == p takes the first branch; both branches hit 1.0 there.
      return x <= map.p ? x / map.p : (1.0 - x) / (1.0 - map.p);
    case MapKind::Pwlcm: {
      double lo = 0.0;
      const std::size_t n = map.branches.size();
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const PwlcmBranch& br = map.branches[i];
        if (x < br.hi) {
          return br.ascending ? (x - lo) / (br.hi - lo) : (br.hi - x) / (br.hi - lo);
        }
        lo = br.hi;
      }
      const PwlcmBranch& last = map.branches[n - 1];
      return last.ascending ? (x - lo) / (last.hi - lo) : (last.hi - x) / (last.hi - lo);
    }
  }
  return x;  // unreachable
}

/// Advance the orbit by exactly one map application. When perturbation is on
/// and the countdown expires, a displacement of (draw mod 2^magnitude_bits)
/// * 2^-52 is added, wrapping at the right interval edge; the draw is indexed
/// by the absolute iteration number, so the orbit is a pure function of
/// (initial state, MapSpec, PerturbConfig).
inline OrbitState iterate(OrbitState state, const MapSpec& map, const PerturbConfig& perturb) {
  if (!(state.x >= 0.0 && state.x <= 1.0)) {
    throw std::domain_error("orbit state left the defining interval [0,1]");
  }
  state.x = map_step(map, state.x);
  ++state.total_iters;
  if (perturb.enabled && --state.perturb_countdown == 0) {
    const std::uint64_t draw = splitmix64_at(perturb.prng_seed, state.total_iters);
    const std::uint64_t mask = (1ull << perturb.magnitude_bits) - 1ull;
    state.x += static_cast<double>(draw & mask) * 0x1p-52;
    if (state.x > 1.0) state.x -= 1.0;
    state.perturb_countdown = perturb.delta;
  }
  return state;
}

/// n successive `iterate` calls; bit-identical to the explicit loop.
OrbitState iterate_n(OrbitState state, const MapSpec& map, const PerturbConfig& perturb,
                     std::uint64_t n);

/// Closed-form Lyapunov exponent of an onto PWLCM: the negative sum of
/// branch lengths weighted by their log. Skew tent and general PWLCM only;
/// the logistic map has no closed form here and is rejected.
double lyapunov_pwlcm(const MapSpec& map);

}  // namespace baptista
