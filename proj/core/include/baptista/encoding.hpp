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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "baptista/cipher.hpp"
#include "baptista/key.hpp"

namespace baptista {

// Wire formats. A ciphertext file is a 16-byte header followed by one
// scheme-specific payload. Every payload starts with the unit count as a
// big-endian 64-bit integer; token and code bits are packed MSB-first and
// the final partial byte is zero-padded. All multibyte integers are
// big-endian. Layout details live in the README.

enum class StreamScheme : std::uint8_t {
  OriginalFixed = 0,       // plain n-bit counts, nmax escapes overflow tuples
  MaskedFixed = 1,         // raw n-bit masked tokens, no escapes possible
  RectifiedVarLen = 2,     // tokens plus occurrence indices, nmax-escaped
  RectifiedCompressed = 3  // Golomb-Rice counts, unary occurrence indices
};

struct TokenStreamHeader {
  StreamScheme scheme = StreamScheme::OriginalFixed;
  std::uint32_t n_bits = 16;
  std::uint32_t s = 256;

  friend bool operator==(const TokenStreamHeader&, const TokenStreamHeader&) = default;
};

inline constexpr std::size_t kHeaderSize = 16;

std::array<std::uint8_t, kHeaderSize> encode_header(const TokenStreamHeader& header);
TokenStreamHeader decode_header(std::span<const std::uint8_t> bytes);  // throws FramingError

/// Token tuple for a count at or beyond nmax: exactly nmax becomes
/// (nmax, 0); larger counts become (nmax, q, r) with count = q*nmax + r.
/// When the plain remainder would sit below n0 and the widths allow it,
/// one nmax is folded from the quotient into the remainder so the last
/// token still looks like an ordinary count.
std::vector<std::uint32_t> encode_overflow(std::uint64_t total_count, const KeyMaterial& key);

// Payload codecs (no file header). Counts and escapes are validated on both
// sides; decoders throw FramingError on truncation, stray padding bits, or
// tokens outside their grammar.

std::vector<std::uint8_t> encode_fixed(std::span<const CipherUnit> units, const KeyMaterial& key,
                                       StreamScheme scheme);
std::vector<CipherUnit> decode_fixed(std::span<const std::uint8_t> payload,
                                     const KeyMaterial& key, StreamScheme scheme);

std::vector<std::uint8_t> encode_varlen(std::span<const CipherUnit> units,
                                        const KeyMaterial& key);
std::vector<CipherUnit> decode_varlen(std::span<const std::uint8_t> payload,
                                      const KeyMaterial& key);

/// Entropy coding tuned for the geometric count law: Golomb-Rice on
/// count - n0 (reduced mod 2^n) with the Rice parameter picked from the
/// sample mean and stored in the payload, unary for occurrence indices.
/// Lossless for any unit sequence; only geometric ones get smaller.
std::vector<std::uint8_t> compress_geometric(std::span<const CipherUnit> units,
                                             const KeyMaterial& key);
std::vector<CipherUnit> decompress_geometric(std::span<const std::uint8_t> payload,
                                             const KeyMaterial& key);

/// Rice parameter chosen for a unit sequence: roundable log2 of the mean
/// reduced count, ignoring overflow units (they are always escaped).
std::uint32_t rice_parameter(std::span<const CipherUnit> units, const KeyMaterial& key);

// Whole-file framing: header plus payload.

std::vector<std::uint8_t> encode_stream(std::span<const CipherUnit> units,
                                        const KeyMaterial& key, StreamScheme scheme,
                                        std::uint32_t s = 256);
struct DecodedStream {
  TokenStreamHeader header;
  std::vector<CipherUnit> units;
};
DecodedStream decode_stream(std::span<const std::uint8_t> bytes, const KeyMaterial& key);

}  // namespace baptista
