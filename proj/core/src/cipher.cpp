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

#include "baptista/cipher.hpp"

#include <cmath>
#include <stdexcept>

#include "baptista/errors.hpp"

namespace baptista {

namespace {

// Stops runaway searches on degenerate orbits (a fixed point, or a state
// parked outside the visiting interval with perturbation off). Ordinary
// overflow searches finish millions of times earlier.
constexpr std::uint64_t kEncipherIterationCap = 1ull << 24;

}  // namespace

OccurrenceTable::OccurrenceTable(std::uint32_t n_bits)
    : slots_(std::size_t{1} << n_bits, 0) {}

std::uint32_t OccurrenceTable::increment(std::uint32_t token) {
  std::uint64_t& slot = slots_[token];
  std::uint32_t c = (slot >> 16) == epoch_ ? static_cast<std::uint32_t>(slot & 0xFFFFu) : 0;
  if (c == 0xFFFFu) {
    throw Error("occurrence counter saturated its 16-bit storage");
  }
  ++c;
  slot = (epoch_ << 16) | c;
  return c;
}

namespace {

void check_session_config(const KeyMaterial& key, const Partition& partition,
                          CipherVariant variant) {
  key.validate();
  if (variant != CipherVariant::Original && !key.mask_enabled) {
    throw std::invalid_argument("masked and rectified variants need mask_enabled in the key");
  }
  if (key.perturb.enabled &&
      std::ldexp(1.0, static_cast<int>(key.perturb.magnitude_bits) - 52) >= partition.epsilon) {
    throw std::invalid_argument("perturbation displacement reaches a whole partition cell");
  }
}

}  // namespace

EncryptSession::EncryptSession(const KeyMaterial& key, const Partition& partition,
                               CipherVariant variant, MaskFn mask)
    : key_(key),
      partition_(partition),
      variant_(variant),
      mask_(mask),
      state_(initial_state(key.x0, key.perturb)),
      kappa_rng_(domain_seed(key.assoc_seed, RngDomain::Kappa)),
      occurrences_(variant == CipherVariant::Rectified ? key.n_bits : 0) {
  check_session_config(key_, partition_, variant_);
}

CipherUnit EncryptSession::encrypt_symbol(Symbol m) {
  if (m >= partition_.s) {
    throw std::invalid_argument("plaintext symbol outside the alphabet");
  }
  const bool masked = variant_ != CipherVariant::Original;
  const bool rectified = variant_ == CipherVariant::Rectified;
  const std::uint32_t nmask = (1u << key_.n_bits) - 1u;
  if (rectified) occurrences_.begin_character();

  OrbitState st = state_;
  for (std::uint64_t k = 1; k <= kEncipherIterationCap; ++k) {
    st = iterate(st, key_.map, key_.perturb);
    if (k < key_.n0) continue;

    std::uint32_t token = 0;
    std::uint32_t occurrence = 1;
    if (rectified) {
      token = (static_cast<std::uint32_t>(k) & nmask) ^ mask_(st.x, key_.n_bits);
      occurrence = occurrences_.increment(token);
    }
    if (partition_.symbol_at(st.x) != m) continue;
    // With eta > 0 a match is only taken when a fresh draw clears the bar,
    // which spreads the emitted counts beyond the first hit.
    if (key_.eta != 0.0 && to_unit_double(kappa_rng_.next()) < key_.eta) continue;

    state_ = st;
    CipherUnit unit;
    unit.b_count = occurrence;
    if (k > key_.nmax) {
      unit.count = static_cast<std::uint32_t>(k);
      unit.overflow = true;
    } else if (masked) {
      unit.count = rectified ? token
                             : (static_cast<std::uint32_t>(k) ^ mask_(st.x, key_.n_bits));
    } else {
      unit.count = static_cast<std::uint32_t>(k);
    }
    return unit;
  }
  throw Error("encryption search exceeded the iteration cap; the orbit is degenerate");
}

std::vector<CipherUnit> EncryptSession::encrypt(std::span<const Symbol> message) {
  std::vector<CipherUnit> units;
  units.reserve(message.size());
  for (const Symbol m : message) units.push_back(encrypt_symbol(m));
  return units;
}

DecryptSession::DecryptSession(const KeyMaterial& key, const Partition& partition,
                               CipherVariant variant, MaskFn mask)
    : key_(key),
      partition_(partition),
      variant_(variant),
      mask_(mask),
      state_(initial_state(key.x0, key.perturb)) {
  check_session_config(key_, partition_, variant_);
}

std::uint32_t DecryptSession::replay_count(std::uint64_t count) {
  state_ = iterate_n(state_, key_.map, key_.perturb, count);
  return partition_.symbol_at(state_.x);
}

std::uint32_t DecryptSession::scan_masked(const CipherUnit& unit) {
  if (unit.overflow) {
    throw CorruptCiphertextError("the masked variant cannot carry overflow units");
  }
  const std::uint64_t cap = 4ull * key_.nmax;
  OrbitState st = state_;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    st = iterate(st, key_.map, key_.perturb);
    if (k < key_.n0) continue;
    // Full-width XOR: once k outgrows n bits no token can match, so the cap
    // is only ever reached on a genuinely unmatchable unit.
    if ((static_cast<std::uint32_t>(k) ^ mask_(st.x, key_.n_bits)) == unit.count) {
      state_ = st;
      return partition_.symbol_at(st.x);  // kBeta possible after a collision
    }
  }
  throw DesyncError("masked scan found no matching count within the cap");
}

std::uint32_t DecryptSession::scan_rectified(const CipherUnit& unit) {
  if (unit.b_count < 1) {
    throw CorruptCiphertextError("occurrence index must be positive");
  }
  if (unit.overflow) {
    const std::uint32_t sym = replay_count(unit.count);
    if (sym == kBeta) {
      throw CorruptCiphertextError("decrypted state fell outside the visiting interval");
    }
    return sym;
  }
  const std::uint32_t nmask = (1u << key_.n_bits) - 1u;
  const std::uint64_t cap = 4ull * key_.nmax;
  std::uint32_t seen = 0;
  OrbitState st = state_;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    st = iterate(st, key_.map, key_.perturb);
    if (k < key_.n0) continue;
    const std::uint32_t token =
        (static_cast<std::uint32_t>(k) & nmask) ^ mask_(st.x, key_.n_bits);
    if (token != unit.count) continue;
    if (++seen < unit.b_count) continue;
    state_ = st;
    const std::uint32_t sym = partition_.symbol_at(st.x);
    if (sym == kBeta) {
      throw CorruptCiphertextError("decrypted state fell outside the visiting interval");
    }
    return sym;
  }
  throw CorruptCiphertextError("occurrence scan exhausted the cap without enough matches");
}

std::uint32_t DecryptSession::decrypt_unit(const CipherUnit& unit) {
  switch (variant_) {
    case CipherVariant::Original: {
      if (unit.overflow ? unit.count <= key_.nmax
                        : (unit.count < key_.n0 || unit.count > key_.nmax)) {
        throw CorruptCiphertextError("iteration count outside its declared range");
      }
      const std::uint32_t sym = replay_count(unit.count);
      if (sym == kBeta) {
        throw CorruptCiphertextError("decrypted state fell outside the visiting interval");
      }
      return sym;
    }
    case CipherVariant::Masked:
      return scan_masked(unit);
    case CipherVariant::Rectified:
      if (!unit.overflow && unit.count > ((1u << key_.n_bits) - 1u)) {
        throw CorruptCiphertextError("masked token wider than n bits");
      }
      return scan_rectified(unit);
  }
  throw std::logic_error("unknown cipher variant");
}

std::vector<std::uint32_t> DecryptSession::decrypt(std::span<const CipherUnit> units) {
  std::vector<std::uint32_t> symbols;
  symbols.reserve(units.size());
  for (const CipherUnit& u : units) symbols.push_back(decrypt_unit(u));
  return symbols;
}

std::vector<CipherUnit> encrypt_message(const KeyMaterial& key, const Partition& partition,
                                        CipherVariant variant, std::span<const Symbol> message) {
  EncryptSession session(key, partition, variant, f_be);
  return session.encrypt(message);
}

std::vector<std::uint32_t> decrypt_message(const KeyMaterial& key, const Partition& partition,
                                           CipherVariant variant,
                                           std::span<const CipherUnit> units) {
  DecryptSession session(key, partition, variant, f_be);
  return session.decrypt(units);
}

}  // namespace baptista
