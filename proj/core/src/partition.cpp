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

#include "baptista/partition.hpp"

#include <numeric>
#include <stdexcept>

namespace baptista {

std::vector<Symbol> derive_association(const Seed128& seed, std::uint32_t s) {
  if (s < 2 || s > 0x10000u) {
    throw std::invalid_argument("alphabet size must lie in [2, 65536]");
  }
  std::vector<Symbol> perm(s);
  std::iota(perm.begin(), perm.end(), Symbol{0});
  SplitMix64 rng(domain_seed(seed, RngDomain::Association));
  for (std::uint32_t i = s - 1; i > 0; --i) {
    const auto j = static_cast<std::uint32_t>(uniform_below(rng, i + 1ull));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

Partition Partition::make(double x_min, double x_max, std::uint32_t s,
                          const Seed128& assoc_seed) {
  if (!(x_min < x_max) || x_min < 0.0 || x_max > 1.0) {
    throw std::invalid_argument("visiting interval must satisfy 0 <= x_min < x_max <= 1");
  }
  Partition part;
  part.x_min = x_min;
  part.x_max = x_max;
  part.s = s;
  part.epsilon = (x_max - x_min) / static_cast<double>(s);
  part.association = derive_association(assoc_seed, s);
  return part;
}

VisitingInterval default_visiting_interval(MapKind kind) {
  switch (kind) {
    case MapKind::Logistic:
      return {0.2, 0.8};
    case MapKind::SkewTent:
    case MapKind::Pwlcm:
      return {0.05, 0.95};
  }
  throw std::invalid_argument("unknown map kind");
}

}  // namespace baptista
