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

// Throughput numbers for the hot paths: raw map iteration, per-character
// encryption and decryption, and the three payload codecs. Character rates
// are dominated by the geometric iteration count (roughly 530 map steps per
// character at the default parameters), so items/s for the cipher
// benchmarks means characters, not map steps.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "baptista/cipher.hpp"
#include "baptista/encoding.hpp"
#include "baptista/key.hpp"

namespace {

using namespace baptista;

KeyMaterial bench_key() {
  KeyMaterial key;
  key.map = MapSpec::skew_tent(0.37);
  key.x0 = 0.33;
  key.assoc_seed = Seed128{0xAAAABBBBCCCCDDDDull, 0x1111222233334444ull};
  key.perturb = PerturbConfig{true, 16, 0xFACEull, 8};
  return key;
}

void BM_IterateTent(benchmark::State& state) {
  const MapSpec map = MapSpec::skew_tent(0.37);
  const PerturbConfig perturb{true, 16, 0xFACEull, 8};
  OrbitState st = initial_state(0.33, perturb);
  for (auto _ : state) {
    st = iterate(st, map, perturb);
    benchmark::DoNotOptimize(st.x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IterateTent);

void BM_IterateLogistic(benchmark::State& state) {
  const MapSpec map = MapSpec::logistic(4.0);
  const PerturbConfig perturb{true, 16, 0xFACEull, 8};
  OrbitState st = initial_state(0.33, perturb);
  for (auto _ : state) {
    st = iterate(st, map, perturb);
    benchmark::DoNotOptimize(st.x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IterateLogistic);

void BM_IteratePwlcm(benchmark::State& state) {
  const MapSpec map = MapSpec::pwlcm({{0.31, true}, {0.64, false}, {1.0, true}});
  const PerturbConfig perturb{true, 16, 0xFACEull, 8};
  OrbitState st = initial_state(0.33, perturb);
  for (auto _ : state) {
    st = iterate(st, map, perturb);
    benchmark::DoNotOptimize(st.x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IteratePwlcm);

void BM_EncryptChar(benchmark::State& state, CipherVariant variant) {
  const KeyMaterial key = bench_key();
  const Partition partition = partition_for(key);
  EncryptSession session(key, partition, variant);
  SplitMix64 rng(42);
  for (auto _ : state) {
    const auto m = static_cast<Symbol>(uniform_below(rng, partition.s));
    benchmark::DoNotOptimize(session.encrypt_symbol(m));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_EncryptChar, original, CipherVariant::Original);
BENCHMARK_CAPTURE(BM_EncryptChar, masked, CipherVariant::Masked);
BENCHMARK_CAPTURE(BM_EncryptChar, rectified, CipherVariant::Rectified);

void BM_DecryptChar(benchmark::State& state, CipherVariant variant) {
  const KeyMaterial key = bench_key();
  const Partition partition = partition_for(key);
  SplitMix64 rng(42);
  std::vector<Symbol> message(4096);
  for (Symbol& m : message) m = static_cast<Symbol>(uniform_below(rng, partition.s));
  const std::vector<CipherUnit> units = encrypt_message(key, partition, variant, message);
  DecryptSession session(key, partition, variant);
  std::size_t next = 0;
  for (auto _ : state) {
    if (next == units.size()) {
      // Start the stream over; rebuilding the session costs one pause.
      state.PauseTiming();
      session = DecryptSession(key, partition, variant);
      next = 0;
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(session.decrypt_unit(units[next++]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_DecryptChar, original, CipherVariant::Original);
BENCHMARK_CAPTURE(BM_DecryptChar, rectified, CipherVariant::Rectified);

std::vector<CipherUnit> codec_units(const KeyMaterial& key, std::size_t n) {
  const Partition partition = partition_for(key);
  SplitMix64 rng(7);
  std::vector<Symbol> message(n);
  for (Symbol& m : message) m = static_cast<Symbol>(uniform_below(rng, partition.s));
  return encrypt_message(key, partition, CipherVariant::Rectified, message);
}

void BM_EncodeVarlen(benchmark::State& state) {
  const KeyMaterial key = bench_key();
  const std::vector<CipherUnit> units = codec_units(key, 10000);
  std::size_t bytes = 0;
  for (auto _ : state) {
    const std::vector<std::uint8_t> blob = encode_varlen(units, key);
    bytes = blob.size();
    benchmark::DoNotOptimize(blob.data());
  }
  state.SetItemsProcessed(state.iterations() * units.size());
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_EncodeVarlen);

void BM_DecodeVarlen(benchmark::State& state) {
  const KeyMaterial key = bench_key();
  const std::vector<CipherUnit> units = codec_units(key, 10000);
  const std::vector<std::uint8_t> blob = encode_varlen(units, key);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_varlen(blob, key).data());
  }
  state.SetItemsProcessed(state.iterations() * units.size());
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(blob.size()));
}
BENCHMARK(BM_DecodeVarlen);

void BM_CompressGeometric(benchmark::State& state) {
  const KeyMaterial key = bench_key();
  const std::vector<CipherUnit> units = codec_units(key, 10000);
  std::size_t bytes = 0;
  for (auto _ : state) {
    const std::vector<std::uint8_t> blob = compress_geometric(units, key);
    bytes = blob.size();
    benchmark::DoNotOptimize(blob.data());
  }
  state.SetItemsProcessed(state.iterations() * units.size());
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_CompressGeometric);

void BM_DecompressGeometric(benchmark::State& state) {
  const KeyMaterial key = bench_key();
  const std::vector<CipherUnit> units = codec_units(key, 10000);
  const std::vector<std::uint8_t> blob = compress_geometric(units, key);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompress_geometric(blob, key).data());
  }
  state.SetItemsProcessed(state.iterations() * units.size());
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(blob.size()));
}
BENCHMARK(BM_DecompressGeometric);

}  // namespace

BENCHMARK_MAIN();
