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

#include "baptista/chaos.hpp"

#include <cmath>

namespace baptista {

MapSpec MapSpec::logistic(double b) {
  MapSpec m;
  m.kind = MapKind::Logistic;
  m.b = b;
  m.validate();
  return m;
}

MapSpec MapSpec::skew_tent(double p) {
  MapSpec m;
  m.kind = MapKind::SkewTent;
  m.p = p;
  m.validate();
  return m;
}

MapSpec MapSpec::pwlcm(std::vector<PwlcmBranch> branches) {
  MapSpec m;
  m.kind = MapKind::Pwlcm;
  m.branches = std::move(branches);
  m.validate();
  return m;
}

void MapSpec::validate() const {
  switch (kind) {
    case MapKind::Logistic:
      if (!(b > 3.5699 && b <= 4.0)) {
        throw std::invalid_argument("logistic parameter must lie in (3.5699, 4]");
      }
      return;
    case MapKind::SkewTent:
      if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("skew tent apex must lie in (0, 1)");
      }
      return;
    case MapKind::Pwlcm: {
      if (branches.size() < 2) {
        throw std::invalid_argument("piecewise map needs at least two branches");
      }
      double lo = 0.0;
      for (const PwlcmBranch& br : branches) {
        if (!(br.hi > lo)) {
          throw std::invalid_argument("piecewise branch edges must be strictly increasing");
        }
        lo = br.hi;
      }
      if (lo != 1.0) {
        throw std::invalid_argument("piecewise branches must end exactly at 1.0");
      }
      return;
    }
  }
  throw std::invalid_argument("unknown map kind");
}

void PerturbConfig::validate() const {
  if (!enabled) return;
  if (delta < 1) {
    throw std::invalid_argument("perturbation period must be at least 1");
  }
  if (magnitude_bits < 1 || magnitude_bits > 40) {
    throw std::invalid_argument("perturbation magnitude must use 1..40 low bits");
  }
}

OrbitState iterate_n(OrbitState state, const MapSpec& map, const PerturbConfig& perturb,
                     std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i) {
    state = iterate(state, map, perturb);
  }
  return state;
}

double lyapunov_pwlcm(const MapSpec& map) {
  map.validate();
  switch (map.kind) {
    case MapKind::Logistic:
      throw std::invalid_argument("no closed-form Lyapunov exponent for the logistic map");
    case MapKind::SkewTent: {
      // Branch lengths p and 1-p. Written as -l*log(l) per branch so the
      // symmetric case p = 0.5 lands exactly on log(2).
      const double l0 = map.p;
      const double l1 = 1.0 - map.p;
      return -(l0 * std::log(l0)) - (l1 * std::log(l1));
    }
    case MapKind::Pwlcm: {
      double sum = 0.0;
      double lo = 0.0;
      for (const PwlcmBranch& br : map.branches) {
        const double len = br.hi - lo;
        sum -= len * std::log(len);
        lo = br.hi;
      }
      return sum;
    }
  }
  throw std::invalid_argument("unknown map kind");
}

}  // namespace baptista
