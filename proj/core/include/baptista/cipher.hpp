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
#include <span>
#include <vector>

#include "baptista/key.hpp"
#include "baptista/partition.hpp"

namespace baptista {

// The three cipher variants share one skeleton: iterate the secret orbit
// until the state lands in the cell associated with the plaintext symbol,
// and transmit how many iterations that took.
//
//   Original:  the count goes out in the clear. Its geometric distribution
//              leaks plaintext statistics.
//   Masked:    the count is XORed with a keystream word squeezed out of the
//              orbit state. The receiver has to search for a count that
//              reproduces the token and can lock onto a collision, so a
//              message of any length eventually garbles. Kept on purpose as
//              the experimental subject; do not use it to protect data.
//   Rectified: like Masked, but the token's occurrence index within the
//              character's search is transmitted too, which pins down the
//              intended count exactly. Round-trips losslessly.

enum class CipherVariant : std::uint8_t { Original, Masked, Rectified };

/// One ciphertext unit. For in-range units `count` is the n-bit token
/// (masked or plain). Units with `overflow` set carry the true iteration
/// count in the clear; it exceeds nmax and may exceed n bits.
struct CipherUnit {
  std::uint32_t count = 0;
  std::uint32_t b_count = 1;  // occurrence index, rectified variant only
  bool overflow = false;

  friend bool operator==(const CipherUnit&, const CipherUnit&) = default;
};

/// Keystream word derived from the orbit state: take floor(x * 2^32) and
/// keep bits [8, 8+n_bits). The low bits churn too fast to be reproducible
/// across rounding differences and the top bits move too slowly; the middle
/// is a serviceable compromise. Both ends evaluate this on bit-identical
/// states, so the words agree.
inline std::uint32_t f_be(double x, std::uint32_t n_bits) {
  const auto word = static_cast<std::uint64_t>(x * 4294967296.0);
  return static_cast<std::uint32_t>((word >> 8) & ((1ull << n_bits) - 1ull));
}

/// Seam for experiments; the ciphers accept any keystream function with
/// this shape (a null mask reduces Masked to Original, for instance).
using MaskFn = std::uint32_t (*)(double x, std::uint32_t n_bits);

/// Per-character occurrence counts B[token] over the full n-bit token
/// space. Counts are 16-bit; reset is O(1) via epoch stamping because the
/// rectified cipher clears the table once per plaintext character.
class OccurrenceTable {
 public:
  explicit OccurrenceTable(std::uint32_t n_bits);

  void begin_character() { ++epoch_; }

  /// Increment B[token] and return the new value. Throws on 16-bit wrap.
  std::uint32_t increment(std::uint32_t token);

  std::uint32_t count(std::uint32_t token) const {
    const std::uint64_t slot = slots_[token];
    return (slot >> 16) == epoch_ ? static_cast<std::uint32_t>(slot & 0xFFFFu) : 0;
  }

 private:
  std::vector<std::uint64_t> slots_;  // (epoch << 16) | count
  std::uint64_t epoch_ = 1;
};

/// Streaming encryptor. Characters are chained: each search starts from the
/// orbit state that emitted the previous unit.
class EncryptSession {
 public:
  EncryptSession(const KeyMaterial& key, const Partition& partition, CipherVariant variant,
                 MaskFn mask = f_be);

  CipherUnit encrypt_symbol(Symbol m);
  std::vector<CipherUnit> encrypt(std::span<const Symbol> message);

  const OrbitState& state() const { return state_; }

 private:
  KeyMaterial key_;
  Partition partition_;
  CipherVariant variant_;
  MaskFn mask_;
  OrbitState state_;
  SplitMix64 kappa_rng_;
  OccurrenceTable occurrences_;
};

/// Streaming decryptor, mirror of EncryptSession. decrypt_unit returns the
/// recovered symbol, or kBeta when a masked-variant collision parks the
/// orbit outside the visiting interval (the caller decides how to react;
/// for the other variants an out-of-range state is a hard error).
class DecryptSession {
 public:
  DecryptSession(const KeyMaterial& key, const Partition& partition, CipherVariant variant,
                 MaskFn mask = f_be);

  std::uint32_t decrypt_unit(const CipherUnit& unit);
  std::vector<std::uint32_t> decrypt(std::span<const CipherUnit> units);

  const OrbitState& state() const { return state_; }

 private:
  std::uint32_t replay_count(std::uint64_t count);
  std::uint32_t scan_masked(const CipherUnit& unit);
  std::uint32_t scan_rectified(const CipherUnit& unit);

  KeyMaterial key_;
  Partition partition_;
  CipherVariant variant_;
  MaskFn mask_;
  OrbitState state_;
};

/// Whole-message conveniences over the session classes.
std::vector<CipherUnit> encrypt_message(const KeyMaterial& key, const Partition& partition,
                                        CipherVariant variant, std::span<const Symbol> message);
std::vector<std::uint32_t> decrypt_message(const KeyMaterial& key, const Partition& partition,
                                           CipherVariant variant,
                                           std::span<const CipherUnit> units);

}  // namespace baptista
