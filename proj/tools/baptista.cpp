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

// Command-line front end: key generation, file encryption/decryption, and
// the statistical analysis runs. Data goes to files, diagnostics to stderr.
// Exit codes: 0 success, 1 data or runtime failure, 2 usage error.

#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "baptista/analysis.hpp"
#include "baptista/cipher.hpp"
#include "baptista/encoding.hpp"
#include "baptista/errors.hpp"
#include "baptista/key.hpp"

namespace {

using namespace baptista;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open input file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("cannot read input file: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error("cannot write output file: " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error("cannot write output file: " + path.string());
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

Seed128 resolve_seed(const std::string& hex) {
  if (!hex.empty()) return parse_seed128(hex);
  std::random_device rd;
  auto word = [&rd] {
    return (std::uint64_t{rd()} << 32) | std::uint64_t{rd()};
  };
  return Seed128{word(), word()};
}

struct SchemeChoice {
  CipherVariant variant;
  StreamScheme stream;
};

SchemeChoice resolve_scheme(const std::string& scheme, const std::string& encoding) {
  if (scheme == "original" || scheme == "masked") {
    if (!encoding.empty() && encoding != "fixed") {
      throw UsageError(scheme + " supports only the fixed encoding");
    }
    return scheme == "original"
               ? SchemeChoice{CipherVariant::Original, StreamScheme::OriginalFixed}
               : SchemeChoice{CipherVariant::Masked, StreamScheme::MaskedFixed};
  }
  if (scheme == "rectified") {
    if (encoding.empty() || encoding == "varlen") {
      return {CipherVariant::Rectified, StreamScheme::RectifiedVarLen};
    }
    if (encoding == "compressed") {
      return {CipherVariant::Rectified, StreamScheme::RectifiedCompressed};
    }
    throw UsageError("rectified supports the varlen and compressed encodings");
  }
  throw UsageError("unknown scheme: " + scheme);
}

CipherVariant variant_for(StreamScheme scheme) {
  switch (scheme) {
    case StreamScheme::OriginalFixed:
      return CipherVariant::Original;
    case StreamScheme::MaskedFixed:
      return CipherVariant::Masked;
    case StreamScheme::RectifiedVarLen:
    case StreamScheme::RectifiedCompressed:
      return CipherVariant::Rectified;
  }
  throw Error("unknown stream scheme");
}

const char* scheme_name(StreamScheme scheme) {
  switch (scheme) {
    case StreamScheme::OriginalFixed:
      return "original";
    case StreamScheme::MaskedFixed:
      return "masked";
    case StreamScheme::RectifiedVarLen:
    case StreamScheme::RectifiedCompressed:
      return "rectified";
  }
  return "?";
}

int run_keygen(const std::string& out, const std::string& seed_hex, double eta) {
  const Seed128 seed = resolve_seed(seed_hex);
  KeyMaterial key = generate_key(seed);
  key.eta = eta;
  key.validate();
  save_key_file(key, out);
  std::cerr << "wrote key file " << out << " (master seed " << format_seed128(seed) << ")\n";
  return 0;
}

int run_encrypt(const std::string& key_path, const std::string& in_path,
                const std::string& out_path, const std::string& scheme,
                const std::string& encoding) {
  const SchemeChoice choice = resolve_scheme(scheme, encoding);
  const KeyMaterial key = load_key_file(key_path);
  const Partition partition = partition_for(key);
  const std::vector<std::uint8_t> bytes = read_file(in_path);
  const std::vector<Symbol> symbols(bytes.begin(), bytes.end());
  const std::vector<CipherUnit> units =
      encrypt_message(key, partition, choice.variant, symbols);
  const std::vector<std::uint8_t> blob = encode_stream(units, key, choice.stream, partition.s);
  write_file(out_path, blob);
  std::cerr << fmt("encrypted %zu plaintext bytes into %zu ciphertext bytes (%s)\n",
                   bytes.size(), blob.size(), scheme.c_str());
  return 0;
}

int run_decrypt(const std::string& key_path, const std::string& in_path,
                const std::string& out_path, const std::string& expect_scheme) {
  const KeyMaterial key = load_key_file(key_path);
  const Partition partition = partition_for(key);
  const std::vector<std::uint8_t> blob = read_file(in_path);
  const DecodedStream decoded = decode_stream(blob, key);
  if (decoded.header.s != partition.s) {
    throw Error(fmt("ciphertext alphabet size %u does not match the key's partition (%u)",
                    decoded.header.s, partition.s));
  }
  if (!expect_scheme.empty() && expect_scheme != scheme_name(decoded.header.scheme)) {
    throw Error(fmt("ciphertext carries scheme '%s', not the requested '%s'",
                    scheme_name(decoded.header.scheme), expect_scheme.c_str()));
  }
  const std::vector<std::uint32_t> symbols =
      decrypt_message(key, partition, variant_for(decoded.header.scheme), decoded.units);
  std::vector<std::uint8_t> bytes;
  bytes.reserve(symbols.size());
  for (const std::uint32_t sym : symbols) {
    if (sym > 0xFF) {
      throw CorruptCiphertextError(
          "decryption produced an out-of-range state; wrong key or damaged ciphertext");
    }
    bytes.push_back(static_cast<std::uint8_t>(sym));
  }
  write_file(out_path, bytes);
  std::cerr << fmt("decrypted %zu units into %zu bytes (%s)\n", decoded.units.size(),
                   bytes.size(), scheme_name(decoded.header.scheme));
  return 0;
}

int run_analyze_dist(const std::string& key_path, std::uint64_t trials,
                     const std::string& seed_hex, const std::string& out_path,
                     const std::string& csv_path) {
  const KeyMaterial key = load_key_file(key_path);
  const Partition partition = partition_for(key);
  const Seed128 seed = resolve_seed(seed_hex);
  const TokenSamples samples = sample_single_char_tokens(key, trials, seed);

  double mean = 0.0;
  for (const std::uint32_t c : samples.counts) mean += c;
  mean /= static_cast<double>(samples.counts.size());
  const double p_from_mean = 1.0 / (mean - key.n0 + 1.0);
  const double p_measured = measure_hit_probability(key, partition, 1u << 20);

  const ChiSquare geo = chi_square_geometric(samples.counts, key.n0);
  const std::uint32_t shift = key.n_bits - 8;
  std::vector<std::uint64_t> token_bins(256, 0);
  std::vector<std::uint64_t> count_bins(256, 0);
  for (const std::uint32_t t : samples.tokens) ++token_bins[t >> shift];
  for (const std::uint32_t c : samples.counts) ++count_bins[c >> shift];
  const ChiSquare masked_uniform = chi_square_uniform(token_bins);
  const ChiSquare plain_uniform = chi_square_uniform(count_bins);

  std::string report;
  report += "iteration count distribution\n";
  report += "============================\n";
  report += fmt("samples                 %zu\n", samples.counts.size());
  report += fmt("mean count              %.3f\n", mean);
  report += fmt("p from mean             %.8f\n", p_from_mean);
  report += fmt("p from orbit occupancy  %.8f\n", p_measured);
  report += fmt("geometric fit           chi2 %.2f, dof %u, critical(1%%) %.2f -> %s\n",
                geo.statistic, geo.dof, geo.critical_1pct, geo.pass_1pct ? "pass" : "FAIL");
  report += fmt("masked token uniformity chi2 %.2f, dof %u, critical(1%%) %.2f -> %s\n",
                masked_uniform.statistic, masked_uniform.dof, masked_uniform.critical_1pct,
                masked_uniform.pass_1pct ? "pass" : "FAIL");
  report += fmt("plain count uniformity  chi2 %.2f, dof %u, critical(1%%) %.2f -> %s\n",
                plain_uniform.statistic, plain_uniform.dof, plain_uniform.critical_1pct,
                plain_uniform.pass_1pct ? "pass" : "FAIL");
  report += "\nthe plain counts are supposed to fail uniformity: the geometric\n";
  report += "decay is the leak the masked and rectified variants paper over.\n";
  write_text(out_path, report);

  if (!csv_path.empty()) {
    std::string csv = "sample,count,token\n";
    for (std::size_t i = 0; i < samples.counts.size(); ++i) {
      csv += fmt("%zu,%u,%u\n", i, samples.counts[i], samples.tokens[i]);
    }
    write_text(csv_path, csv);
  }
  std::cerr << fmt("analyze-dist: geometric fit %s, mask uniformity %s (report in %s)\n",
                   geo.pass_1pct ? "pass" : "FAIL",
                   masked_uniform.pass_1pct ? "pass" : "FAIL", out_path.c_str());
  return 0;
}

int run_analyze_error(const std::string& key_path, const std::string& scheme,
                      std::uint64_t trials, std::uint32_t len, const std::string& seed_hex,
                      const std::string& out_path, const std::string& csv_path) {
  const KeyMaterial key = load_key_file(key_path);
  const Seed128 seed = resolve_seed(seed_hex);
  CipherVariant variant = CipherVariant::Masked;
  if (scheme == "original") variant = CipherVariant::Original;
  if (scheme == "rectified") variant = CipherVariant::Rectified;
  const ErrorRateReport report = error_rate_by_position(key, variant, len, trials, seed);

  std::string text;
  text += fmt("per-position decryption survival, %s scheme\n", scheme.c_str());
  text += "===========================================\n";
  text += fmt("trials         %llu\n", static_cast<unsigned long long>(report.trials));
  text += fmt("message length %u\n", len);
  text += fmt("measured p     %.8f\n", report.p_hat);
  text += fmt("theory pc1     %.12f\n", report.pc1_theory);
  text += fmt("scan desyncs   %llu\n", static_cast<unsigned long long>(report.desyncs));
  text += "\nposition  correct      rate        theory      z\n";
  std::string csv = "position,rate,theory\n";
  for (std::size_t i = 0; i < report.rate.size(); ++i) {
    const double sigma =
        std::sqrt(report.theory[i] * (1.0 - report.theory[i]) /
                  static_cast<double>(report.trials));
    const double z = sigma > 0.0 ? (report.rate[i] - report.theory[i]) / sigma : 0.0;
    text += fmt("%8zu  %9llu  %10.6f  %10.6f  %+6.2f\n", i + 1,
                static_cast<unsigned long long>(report.correct[i]), report.rate[i],
                report.theory[i], z);
    csv += fmt("%zu,%.8f,%.8f\n", i + 1, report.rate[i], report.theory[i]);
  }
  write_text(out_path, text);
  if (!csv_path.empty()) write_text(csv_path, csv);
  std::cerr << fmt("analyze-error: position-1 error rate %.6f (theory %.6f), report in %s\n",
                   1.0 - report.rate[0], 1.0 - report.pc1_theory, out_path.c_str());
  return 0;
}

int run_analyze_map(const std::string& key_path, const std::string& out_path) {
  const KeyMaterial key = load_key_file(key_path);
  constexpr std::uint64_t kIters = 1'000'000;
  const OccupancyReport occ = occupancy_test(key.map, key.perturb, key.x0, kIters, 256);
  const std::vector<double> orbit = orbit_samples(key.map, key.perturb, key.x0, kIters);
  const std::vector<double> tau = autocorrelation(orbit, 8);

  std::string text;
  text += "chaotic map diagnostics\n";
  text += "=======================\n";
  text += fmt("iterates            %llu\n", static_cast<unsigned long long>(kIters));
  text += fmt("occupancy bins      %zu\n", occ.histogram.size());
  text += fmt("worst bin deviation %.2f sigma -> %s\n", occ.max_abs_z,
              occ.within_5_sigma ? "uniform within 5 sigma" : "NOT uniform");
  if (key.map.kind == MapKind::Logistic) {
    text += "lyapunov exponent   n/a (no closed form for the logistic map)\n";
  } else {
    text += fmt("lyapunov exponent   %.9f\n", lyapunov_pwlcm(key.map));
  }
  for (std::size_t lag = 0; lag < tau.size(); ++lag) {
    text += fmt("autocorrelation lag %zu: %+.6f\n", lag + 1, tau[lag]);
  }
  write_text(out_path, text);
  std::cerr << fmt("analyze-map: worst occupancy deviation %.2f sigma, report in %s\n",
                   occ.max_abs_z, out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"laboratory cipher built on chaotic-map iteration counts"};
  app.require_subcommand(1);

  std::string kg_out, kg_seed;
  double kg_eta = 0.0;
  CLI::App* keygen = app.add_subcommand("keygen", "write a fresh key file");
  keygen->add_option("--out", kg_out, "key file to write")->required();
  keygen->add_option("--seed", kg_seed, "32 hex digit master seed (random when omitted)");
  keygen->add_option("--eta", kg_eta, "match acceptance threshold in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));

  std::string en_key, en_in, en_out, en_scheme = "rectified", en_encoding;
  CLI::App* encrypt = app.add_subcommand("encrypt", "encrypt a file");
  encrypt->add_option("--key", en_key)->required();
  encrypt->add_option("--in", en_in)->required();
  encrypt->add_option("--out", en_out)->required();
  encrypt->add_option("--scheme", en_scheme, "original, masked or rectified")
      ->check(CLI::IsMember({"original", "masked", "rectified"}));
  encrypt->add_option("--encoding", en_encoding, "fixed, varlen or compressed")
      ->check(CLI::IsMember({"fixed", "varlen", "compressed"}));

  std::string de_key, de_in, de_out, de_scheme;
  CLI::App* decrypt = app.add_subcommand("decrypt", "decrypt a file");
  decrypt->add_option("--key", de_key)->required();
  decrypt->add_option("--in", de_in)->required();
  decrypt->add_option("--out", de_out)->required();
  decrypt->add_option("--scheme", de_scheme, "require this scheme in the stream header")
      ->check(CLI::IsMember({"original", "masked", "rectified"}));

  std::string ad_key, ad_seed, ad_out, ad_csv;
  std::uint64_t ad_trials = 20000;
  CLI::App* adist = app.add_subcommand("analyze-dist", "token distribution checks");
  adist->add_option("--key", ad_key)->required();
  adist->add_option("--out", ad_out, "text report path")->required();
  adist->add_option("--csv", ad_csv, "optional raw sample dump");
  adist->add_option("--trials", ad_trials)->check(CLI::Range(std::uint64_t{2000}, std::uint64_t{10000000}));
  adist->add_option("--seed", ad_seed, "32 hex digit Monte Carlo seed");

  std::string ae_key, ae_seed, ae_out, ae_csv, ae_scheme = "masked";
  std::uint64_t ae_trials = 20000;
  std::uint32_t ae_len = 50;
  CLI::App* aerr = app.add_subcommand("analyze-error", "per-position decryption error rates");
  aerr->add_option("--key", ae_key)->required();
  aerr->add_option("--out", ae_out, "text report path")->required();
  aerr->add_option("--csv", ae_csv, "optional rate curve dump");
  aerr->add_option("--scheme", ae_scheme)
      ->check(CLI::IsMember({"original", "masked", "rectified"}));
  aerr->add_option("--trials", ae_trials)->check(CLI::Range(std::uint64_t{100}, std::uint64_t{10000000}));
  aerr->add_option("--len", ae_len, "message length")->check(CLI::Range(1u, 10000u));
  aerr->add_option("--seed", ae_seed, "32 hex digit Monte Carlo seed");

  std::string am_key, am_out;
  CLI::App* amap = app.add_subcommand("analyze-map", "invariant density and autocorrelation");
  amap->add_option("--key", am_key)->required();
  amap->add_option("--out", am_out, "text report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*keygen) return run_keygen(kg_out, kg_seed, kg_eta);
    if (*encrypt) return run_encrypt(en_key, en_in, en_out, en_scheme, en_encoding);
    if (*decrypt) return run_decrypt(de_key, de_in, de_out, de_scheme);
    if (*adist) return run_analyze_dist(ad_key, ad_trials, ad_seed, ad_out, ad_csv);
    if (*aerr)
      return run_analyze_error(ae_key, ae_scheme, ae_trials, ae_len, ae_seed, ae_out, ae_csv);
    if (*amap) return run_analyze_map(am_key, am_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
