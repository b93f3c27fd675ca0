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
#include <filesystem>
#include <string>

#include "baptista/chaos.hpp"
#include "baptista/partition.hpp"
#include "baptista/rng.hpp"

namespace baptista {

/// Everything both cipher ends must agree on. The association bijection is
/// deliberately absent: it is derived from assoc_seed on demand, so the key
/// stays short. The eta candidate draws are likewise derived from assoc_seed
/// under a separate domain tag; they matter only on the encrypting side.
struct KeyMaterial {
  MapSpec map = MapSpec{};
  double x0 = 0.5;
  Seed128 assoc_seed{};
  double eta = 0.0;
  std::uint32_t n0 = 250;
  std::uint32_t nmax = 65532;
  PerturbConfig perturb{};
  bool mask_enabled = true;
  std::uint32_t n_bits = 16;

  /// Throws KeyFormatError if any cross-field constraint fails
  /// (n0 < nmax < 2^n_bits, n_bits in [8, 16], x0 and eta in range,
  /// map and perturbation parameters valid).
  void validate() const;

  friend bool operator==(const KeyMaterial&, const KeyMaterial&) = default;
};

/// Fresh key with randomized secrets and the standard public parameters
/// (skew tent map, N0 = 250, Nmax = 65532, n = 16, masking on, perturbation
/// every 16 iterations). Deterministic in the master seed.
KeyMaterial generate_key(const Seed128& master_seed);

/// Text form: one `name = value` per line. Doubles are written with
/// shortest-round-trip precision; seeds as 32 (or 16) hex digits.
std::string format_key(const KeyMaterial& key);

/// Inverse of format_key. Blank lines and `#` comments are permitted;
/// unknown or repeated names are not. Throws KeyFormatError.
KeyMaterial parse_key(const std::string& text);

KeyMaterial load_key_file(const std::filesystem::path& path);
void save_key_file(const KeyMaterial& key, const std::filesystem::path& path);

/// Partition implied by the key: the default visiting interval for the
/// key's map family, s cells, association derived from assoc_seed.
Partition partition_for(const KeyMaterial& key, std::uint32_t s = 256);

}  // namespace baptista
