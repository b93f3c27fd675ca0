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

#include "baptista/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "baptista/errors.hpp"

namespace baptista {

namespace {

// A run of this many ones in a Rice count code announces the escape form:
// one flag bit (overflow or plain wide token) and a raw 64-bit count.
constexpr std::uint32_t kRiceEscapeQuotient = 40;

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t> prefix) : bytes_(std::move(prefix)) {}

  void put_bit(bool bit) {
    acc_ = static_cast<std::uint8_t>((acc_ << 1) | (bit ? 1u : 0u));
    if (++fill_ == 8) {
      bytes_.push_back(acc_);
      acc_ = 0;
      fill_ = 0;
    }
  }

  void put_bits(std::uint64_t value, std::uint32_t width) {
    for (std::uint32_t i = width; i-- > 0;) put_bit((value >> i) & 1u);
  }

  void put_unary(std::uint32_t ones) {
    while (ones-- > 0) put_bit(true);
    put_bit(false);
  }

  std::vector<std::uint8_t> finish() {
    if (fill_ != 0) {
      bytes_.push_back(static_cast<std::uint8_t>(acc_ << (8 - fill_)));
      acc_ = 0;
      fill_ = 0;
    }
    return std::move(bytes_);
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint8_t acc_ = 0;
  std::uint32_t fill_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool get_bit() {
    if (pos_ >= bytes_.size() * 8) {
      throw FramingError("ciphertext payload truncated");
    }
    const bool bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
    ++pos_;
    return bit;
  }

  std::uint64_t get_bits(std::uint32_t width) {
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < width; ++i) v = (v << 1) | (get_bit() ? 1u : 0u);
    return v;
  }

  std::uint32_t get_unary(std::uint32_t max_ones) {
    std::uint32_t ones = 0;
    while (ones < max_ones && get_bit()) ++ones;
    return ones;
  }

  /// The stream must hold nothing but zero padding up to the last byte.
  void expect_zero_padding() {
    while ((pos_ & 7) != 0) {
      if (get_bit()) throw FramingError("nonzero padding bits after the last unit");
    }
    if (pos_ / 8 != bytes_.size()) {
      throw FramingError("trailing bytes after the last unit");
    }
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u64_be(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64_be(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw FramingError("payload shorter than its unit count field");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
  return v;
}

std::uint32_t token_limit(const KeyMaterial& key) {
  return static_cast<std::uint32_t>((1ull << key.n_bits) - 1ull);
}

void require_positive_b(const CipherUnit& u) {
  if (u.b_count < 1) throw FramingError("occurrence index must be positive");
}

}  // namespace

std::array<std::uint8_t, kHeaderSize> encode_header(const TokenStreamHeader& header) {
  if (static_cast<std::uint8_t>(header.scheme) > 3) {
    throw std::invalid_argument("unknown stream scheme");
  }
  if (header.n_bits < 8 || header.n_bits > 16) {
    throw std::invalid_argument("header n_bits must lie in [8, 16]");
  }
  if (header.s < 2 || header.s > 0x10000u) {
    throw std::invalid_argument("header alphabet size must lie in [2, 65536]");
  }
  std::array<std::uint8_t, kHeaderSize> out{};
  out[0] = 'B';
  out[1] = 'T';
  out[2] = 'C';
  out[3] = '1';
  out[4] = static_cast<std::uint8_t>(header.scheme);
  out[5] = static_cast<std::uint8_t>(header.n_bits);
  out[6] = static_cast<std::uint8_t>(header.s >> 24);
  out[7] = static_cast<std::uint8_t>(header.s >> 16);
  out[8] = static_cast<std::uint8_t>(header.s >> 8);
  out[9] = static_cast<std::uint8_t>(header.s);
  return out;
}

TokenStreamHeader decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw FramingError("ciphertext shorter than its header");
  if (bytes[0] != 'B' || bytes[1] != 'T' || bytes[2] != 'C' || bytes[3] != '1') {
    throw FramingError("bad magic; not a ciphertext stream");
  }
  if (bytes[4] > 3) throw FramingError("unknown stream scheme byte");
  TokenStreamHeader header;
  header.scheme = static_cast<StreamScheme>(bytes[4]);
  header.n_bits = bytes[5];
  if (header.n_bits < 8 || header.n_bits > 16) {
    throw FramingError("header n_bits outside [8, 16]");
  }
  header.s = (std::uint32_t(bytes[6]) << 24) | (std::uint32_t(bytes[7]) << 16) |
             (std::uint32_t(bytes[8]) << 8) | std::uint32_t(bytes[9]);
  if (header.s < 2 || header.s > 0x10000u) {
    throw FramingError("header alphabet size outside [2, 65536]");
  }
  for (std::size_t i = 10; i < kHeaderSize; ++i) {
    if (bytes[i] != 0) throw FramingError("reserved header bytes must be zero");
  }
  return header;
}

std::vector<std::uint32_t> encode_overflow(std::uint64_t total_count, const KeyMaterial& key) {
  if (total_count < key.nmax) {
    throw std::invalid_argument("overflow encoding needs a count of at least nmax");
  }
  if (total_count == key.nmax) return {key.nmax, 0};
  std::uint64_t q = total_count / key.nmax;
  std::uint64_t r = total_count % key.nmax;
  const std::uint64_t limit = token_limit(key);
  if (r < key.n0 && q >= 2 && r + key.nmax <= limit) {
    --q;
    r += key.nmax;
  }
  if (q > limit) {
    throw FramingError("overflow count too large for the token width");
  }
  return {key.nmax, static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(r)};
}

std::vector<std::uint8_t> encode_fixed(std::span<const CipherUnit> units, const KeyMaterial& key,
                                       StreamScheme scheme) {
  if (scheme != StreamScheme::OriginalFixed && scheme != StreamScheme::MaskedFixed) {
    throw std::invalid_argument("encode_fixed handles the two fixed-width schemes only");
  }
  const std::uint32_t width = key.n_bits;
  const std::uint32_t limit = token_limit(key);
  std::vector<std::uint8_t> prefix;
  prefix.reserve(8 + units.size() * width / 8 + 1);
  put_u64_be(prefix, units.size());
  BitWriter w(std::move(prefix));
  for (const CipherUnit& u : units) {
    if (u.b_count != 1) {
      throw FramingError("fixed-width schemes cannot carry occurrence indices");
    }
    if (scheme == StreamScheme::MaskedFixed) {
      if (u.overflow) {
        throw FramingError("the masked fixed scheme cannot express overflow");
      }
      if (u.count > limit) throw FramingError("token wider than n bits");
      w.put_bits(u.count, width);
      continue;
    }
    if (u.overflow && u.count <= key.nmax) {
      throw FramingError("overflow unit carries an in-range count");
    }
    if (u.overflow || u.count == key.nmax) {
      for (const std::uint32_t t : encode_overflow(u.count, key)) w.put_bits(t, width);
    } else {
      if (u.count < key.n0 || u.count > key.nmax) {
        throw FramingError("plain count outside [n0, nmax]");
      }
      w.put_bits(u.count, width);
    }
  }
  return w.finish();
}

std::vector<CipherUnit> decode_fixed(std::span<const std::uint8_t> payload,
                                     const KeyMaterial& key, StreamScheme scheme) {
  if (scheme != StreamScheme::OriginalFixed && scheme != StreamScheme::MaskedFixed) {
    throw std::invalid_argument("decode_fixed handles the two fixed-width schemes only");
  }
  const std::uint64_t n = get_u64_be(payload);
  const std::uint32_t width = key.n_bits;
  BitReader r(payload.subspan(8));
  std::vector<CipherUnit> units;
  units.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, payload.size())));
  for (std::uint64_t i = 0; i < n; ++i) {
    CipherUnit u;
    const auto t = static_cast<std::uint32_t>(r.get_bits(width));
    if (scheme == StreamScheme::MaskedFixed) {
      u.count = t;
      units.push_back(u);
      continue;
    }
    if (t < key.n0 || t > key.nmax) {
      throw FramingError("bare count outside [n0, nmax]");
    }
    if (t < key.nmax) {
      u.count = t;
    } else {
      const auto q = static_cast<std::uint32_t>(r.get_bits(width));
      if (q == 0) {
        u.count = key.nmax;
      } else {
        const auto rem = static_cast<std::uint32_t>(r.get_bits(width));
        const std::uint64_t total = std::uint64_t{q} * key.nmax + rem;
        if (total <= key.nmax) {
          throw FramingError("overflow tuple decodes to an in-range count");
        }
        u.count = static_cast<std::uint32_t>(total);
        u.overflow = true;
      }
    }
    units.push_back(u);
  }
  r.expect_zero_padding();
  return units;
}

std::vector<std::uint8_t> encode_varlen(std::span<const CipherUnit> units,
                                        const KeyMaterial& key) {
  const std::uint32_t width = key.n_bits;
  const std::uint32_t limit = token_limit(key);
  std::vector<std::uint8_t> prefix;
  prefix.reserve(8 + units.size() * width / 8 + 1);
  put_u64_be(prefix, units.size());
  BitWriter w(std::move(prefix));
  for (const CipherUnit& u : units) {
    require_positive_b(u);
    if (u.overflow) {
      if (u.count <= key.nmax) {
        throw FramingError("overflow unit carries an in-range count");
      }
      const std::uint32_t q = u.count / key.nmax;
      const std::uint32_t rem = u.count % key.nmax;
      if (q > limit || u.b_count > limit) {
        throw FramingError("overflow unit too large for the token width");
      }
      w.put_bits(key.nmax, width);
      w.put_bits(key.nmax, width);
      w.put_bits(u.b_count, width);
      w.put_bits(q, width);
      w.put_bits(rem, width);
      continue;
    }
    if (u.count > limit) throw FramingError("token wider than n bits");
    if (u.b_count == 1 && u.count >= key.n0 && u.count < key.nmax) {
      w.put_bits(u.count, width);
    } else if (u.b_count == 1 && u.count == key.nmax) {
      w.put_bits(key.nmax, width);
      w.put_bits(0, width);
    } else if (u.b_count < key.nmax) {
      w.put_bits(key.nmax, width);
      w.put_bits(u.b_count, width);
      w.put_bits(u.count, width);
    } else {
      if (u.b_count > limit) {
        throw FramingError("occurrence index too large for the token width");
      }
      w.put_bits(key.nmax, width);
      w.put_bits(key.nmax, width);
      w.put_bits(u.b_count, width);
      w.put_bits(0, width);
      w.put_bits(u.count, width);
    }
  }
  return w.finish();
}

std::vector<CipherUnit> decode_varlen(std::span<const std::uint8_t> payload,
                                      const KeyMaterial& key) {
  const std::uint64_t n = get_u64_be(payload);
  const std::uint32_t width = key.n_bits;
  BitReader r(payload.subspan(8));
  std::vector<CipherUnit> units;
  units.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, payload.size())));
  for (std::uint64_t i = 0; i < n; ++i) {
    CipherUnit u;
    const auto t = static_cast<std::uint32_t>(r.get_bits(width));
    if (t != key.nmax) {
      if (t < key.n0 || t > key.nmax) {
        throw FramingError("bare token outside [n0, nmax)");
      }
      u.count = t;
      units.push_back(u);
      continue;
    }
    const auto second = static_cast<std::uint32_t>(r.get_bits(width));
    if (second == 0) {
      u.count = key.nmax;
      units.push_back(u);
      continue;
    }
    if (second != key.nmax) {
      if (second > key.nmax) {
        throw FramingError("occurrence token outside its range");
      }
      u.b_count = second;
      u.count = static_cast<std::uint32_t>(r.get_bits(width));
      units.push_back(u);
      continue;
    }
    const auto b = static_cast<std::uint32_t>(r.get_bits(width));
    const auto q = static_cast<std::uint32_t>(r.get_bits(width));
    const auto rem = static_cast<std::uint32_t>(r.get_bits(width));
    if (b < 1) throw FramingError("occurrence index must be positive");
    if (q == 0) {
      // Double escape without a quotient is reserved for the rare units
      // whose occurrence index collides with the escape token itself.
      if (b < key.nmax) {
        throw FramingError("double escape used where a single escape suffices");
      }
      u.b_count = b;
      u.count = rem;
    } else {
      const std::uint64_t total = std::uint64_t{q} * key.nmax + rem;
      if (total <= key.nmax) {
        throw FramingError("overflow tuple decodes to an in-range count");
      }
      u.b_count = b;
      u.count = static_cast<std::uint32_t>(total);
      u.overflow = true;
    }
    units.push_back(u);
  }
  r.expect_zero_padding();
  return units;
}

std::uint32_t rice_parameter(std::span<const CipherUnit> units, const KeyMaterial& key) {
  const std::uint64_t wrap = 1ull << key.n_bits;
  double sum = 0.0;
  std::uint64_t n = 0;
  for (const CipherUnit& u : units) {
    if (u.overflow) continue;
    sum += static_cast<double>((u.count + wrap - key.n0) & (wrap - 1));
    ++n;
  }
  if (n == 0) return 0;
  const double mean = sum / static_cast<double>(n);
  if (mean <= 1.0) return 0;
  const long k = std::lround(std::log2(mean));
  return static_cast<std::uint32_t>(std::clamp<long>(k, 0, 16));
}

std::vector<std::uint8_t> compress_geometric(std::span<const CipherUnit> units,
                                             const KeyMaterial& key) {
  const std::uint32_t k = rice_parameter(units, key);
  const std::uint64_t wrap = 1ull << key.n_bits;
  const std::uint32_t limit = token_limit(key);
  std::vector<std::uint8_t> prefix;
  prefix.reserve(8 + 1 + units.size() * (k + 3) / 8 + 1);
  put_u64_be(prefix, units.size());
  prefix.push_back(static_cast<std::uint8_t>(k));
  BitWriter w(std::move(prefix));
  for (const CipherUnit& u : units) {
    require_positive_b(u);
    if (!u.overflow && u.count > limit) {
      throw FramingError("token wider than n bits");
    }
    if (u.overflow && u.count <= key.nmax) {
      throw FramingError("overflow unit carries an in-range count");
    }
    const std::uint32_t reduced =
        u.overflow ? 0 : static_cast<std::uint32_t>((u.count + wrap - key.n0) & (wrap - 1));
    const std::uint32_t q = reduced >> k;
    if (u.overflow || q >= kRiceEscapeQuotient) {
      // A full-length run is the escape marker and carries no terminator;
      // the reader stops counting at kRiceEscapeQuotient ones.
      for (std::uint32_t j = 0; j < kRiceEscapeQuotient; ++j) w.put_bit(true);
      w.put_bit(u.overflow);
      w.put_bits(u.count, 64);
    } else {
      w.put_unary(q);
      w.put_bits(reduced & ((1ull << k) - 1ull), k);
    }
    w.put_unary(u.b_count - 1);
  }
  return w.finish();
}

std::vector<CipherUnit> decompress_geometric(std::span<const std::uint8_t> payload,
                                             const KeyMaterial& key) {
  const std::uint64_t n = get_u64_be(payload);
  if (payload.size() < 9) throw FramingError("compressed payload misses its Rice parameter");
  const std::uint32_t k = payload[8];
  if (k > 32) throw FramingError("Rice parameter out of range");
  const std::uint64_t wrap = 1ull << key.n_bits;
  const std::uint32_t limit = token_limit(key);
  BitReader r(payload.subspan(9));
  std::vector<CipherUnit> units;
  units.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, payload.size())));
  for (std::uint64_t i = 0; i < n; ++i) {
    CipherUnit u;
    const std::uint32_t q = r.get_unary(kRiceEscapeQuotient);
    if (q == kRiceEscapeQuotient) {
      u.overflow = r.get_bit();
      const std::uint64_t raw = r.get_bits(64);
      if (u.overflow ? (raw <= key.nmax || raw > 0xFFFFFFFFull) : raw > limit) {
        throw FramingError("escaped count outside its range");
      }
      u.count = static_cast<std::uint32_t>(raw);
    } else {
      const std::uint64_t reduced = (std::uint64_t{q} << k) | r.get_bits(k);
      if (reduced > limit) throw FramingError("Rice code decodes beyond the token width");
      u.count = static_cast<std::uint32_t>((reduced + key.n0) & (wrap - 1));
    }
    const std::uint32_t b_ones = r.get_unary(0xFFFFu);
    if (b_ones == 0xFFFFu) throw FramingError("occurrence code too long");
    u.b_count = b_ones + 1;
    units.push_back(u);
  }
  r.expect_zero_padding();
  return units;
}

std::vector<std::uint8_t> encode_stream(std::span<const CipherUnit> units,
                                        const KeyMaterial& key, StreamScheme scheme,
                                        std::uint32_t s) {
  TokenStreamHeader header;
  header.scheme = scheme;
  header.n_bits = key.n_bits;
  header.s = s;
  const std::array<std::uint8_t, kHeaderSize> head = encode_header(header);
  std::vector<std::uint8_t> payload;
  switch (scheme) {
    case StreamScheme::OriginalFixed:
    case StreamScheme::MaskedFixed:
      payload = encode_fixed(units, key, scheme);
      break;
    case StreamScheme::RectifiedVarLen:
      payload = encode_varlen(units, key);
      break;
    case StreamScheme::RectifiedCompressed:
      payload = compress_geometric(units, key);
      break;
  }
  std::vector<std::uint8_t> out(kHeaderSize + payload.size());
  std::copy(head.begin(), head.end(), out.begin());
  std::copy(payload.begin(), payload.end(), out.begin() + kHeaderSize);
  return out;
}

DecodedStream decode_stream(std::span<const std::uint8_t> bytes, const KeyMaterial& key) {
  DecodedStream result;
  result.header = decode_header(bytes);
  if (result.header.n_bits != key.n_bits) {
    throw FramingError("stream token width disagrees with the key");
  }
  const std::span<const std::uint8_t> payload = bytes.subspan(kHeaderSize);
  switch (result.header.scheme) {
    case StreamScheme::OriginalFixed:
    case StreamScheme::MaskedFixed:
      result.units = decode_fixed(payload, key, result.header.scheme);
      break;
    case StreamScheme::RectifiedVarLen:
      result.units = decode_varlen(payload, key);
      break;
    case StreamScheme::RectifiedCompressed:
      result.units = decompress_geometric(payload, key);
      break;
  }
  return result;
}

}  // namespace baptista
