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

// End-to-end checks of the installed command line tool: it is launched as a
// child process exactly the way a user would run it. Exit codes are part of
// the contract (0 ok, 1 data error, 2 usage error), as is byte-stability of
// the stream format, pinned by the fixtures directory.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "baptista/key.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BAPTISTA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string slurp_text(const fs::path& p) {
  const std::vector<std::uint8_t> bytes = slurp(p);
  return {bytes.begin(), bytes.end()};
}

void spit(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  REQUIRE(out.good());
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "baptista_cli_XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    REQUIRE(mkdtemp(buf.data()) != nullptr);
    path = buf.data();
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// Every byte value, several times over, so the round trips cover the whole
// alphabet including NUL and 0xFF.
std::vector<std::uint8_t> full_alphabet_message() {
  std::vector<std::uint8_t> bytes;
  for (int rep = 0; rep < 4; ++rep) {
    for (int v = 0; v < 256; ++v) bytes.push_back(static_cast<std::uint8_t>(v));
  }
  return bytes;
}

constexpr const char* kSeedA = "00112233445566778899aabbccddeeff";
constexpr const char* kSeedB = "5a5a5a5a5a5a5a5a0f0f0f0f0f0f0f0f";
constexpr const char* kMcSeed = "000000000000002a0000000000000007";

}  // namespace

TEST_CASE("usage problems exit with status 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("keygen") == 2);
  CHECK(run_cli("keygen --out /tmp/ignored.key --bogus-flag") == 2);
  CHECK(run_cli("keygen --out /tmp/ignored.key --eta 1.5") == 2);
  CHECK(run_cli("encrypt --key k --in i --out o --scheme bogus") == 2);
  // Scheme/encoding conflicts are detected before any file is touched.
  CHECK(run_cli("encrypt --key k --in i --out o --scheme original --encoding varlen") == 2);
  CHECK(run_cli("encrypt --key k --in i --out o --scheme masked --encoding compressed") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("encrypt --help") == 0);
}

TEST_CASE("keygen writes deterministic, loadable key files") {
  TempDir dir;
  const fs::path k1 = dir.path / "a.key";
  const fs::path k2 = dir.path / "b.key";
  const fs::path k3 = dir.path / "c.key";
  REQUIRE(run_cli("keygen --seed " + std::string(kSeedA) + " --out " + quoted(k1)) == 0);
  REQUIRE(run_cli("keygen --seed " + std::string(kSeedA) + " --out " + quoted(k2)) == 0);
  REQUIRE(run_cli("keygen --seed " + std::string(kSeedB) + " --out " + quoted(k3)) == 0);
  CHECK(slurp(k1) == slurp(k2));
  CHECK(slurp(k1) != slurp(k3));

  const baptista::KeyMaterial key = baptista::load_key_file(k1);
  CHECK(key.map.kind == baptista::MapKind::SkewTent);
  CHECK(key.n_bits == 16);
  CHECK(key.n0 == 250);
  CHECK(key.nmax == 65532);
  CHECK(key.eta == 0.0);
  CHECK(key.mask_enabled);
  CHECK(key.perturb.enabled);

  const fs::path k4 = dir.path / "eta.key";
  REQUIRE(run_cli("keygen --seed " + std::string(kSeedA) + " --eta 0.25 --out " + quoted(k4)) ==
          0);
  CHECK(baptista::load_key_file(k4).eta == 0.25);
}

TEST_CASE("encrypt and decrypt round trip through files") {
  TempDir dir;
  const fs::path key = dir.path / "round.key";
  const fs::path pt = dir.path / "message.bin";
  REQUIRE(run_cli("keygen --seed " + std::string(kSeedA) + " --out " + quoted(key)) == 0);
  const std::vector<std::uint8_t> message = full_alphabet_message();
  spit(pt, message);

  struct Case {
    const char* args;
    std::uint8_t scheme_byte;
  };
  const Case cases[] = {
      {"--scheme rectified", 2},
      {"--scheme rectified --encoding compressed", 3},
      {"--scheme original", 0},
  };
  for (const Case& c : cases) {
    CAPTURE(c.args);
    const fs::path ct = dir.path / "ct.bin";
    const fs::path ct2 = dir.path / "ct2.bin";
    const fs::path back = dir.path / "back.bin";
    REQUIRE(run_cli("encrypt --key " + quoted(key) + " --in " + quoted(pt) + " --out " +
                    quoted(ct) + " " + c.args) == 0);
    const std::vector<std::uint8_t> blob = slurp(ct);
    REQUIRE(blob.size() > 16);
    CHECK(blob[0] == 'B');
    CHECK(blob[1] == 'T');
    CHECK(blob[2] == 'C');
    CHECK(blob[3] == '1');
    CHECK(blob[4] == c.scheme_byte);

    // Same key, same plaintext: the stream must come out byte-identical.
    REQUIRE(run_cli("encrypt --key " + quoted(key) + " --in " + quoted(pt) + " --out " +
                    quoted(ct2) + " " + c.args) == 0);
    CHECK(slurp(ct2) == blob);

    REQUIRE(run_cli("decrypt --key " + quoted(key) + " --in " + quoted(ct) + " --out " +
                    quoted(back)) == 0);
    CHECK(slurp(back) == message);
  }
}

TEST_CASE("masked streams round trip for short messages") {
  // The masked variant forgets the count and keeps only count xor state
  // bits, so recovery is probabilistic: roughly one character in 258 comes
  // back wrong. This short message and this key are known to survive; a
  // kilobyte message would almost surely not.
  TempDir dir;
  const fs::path key = dir.path / "masked.key";
  const fs::path pt = dir.path / "short.txt";
  const fs::path ct = dir.path / "short.ct";
  const fs::path back = dir.path / "short.back";
  REQUIRE(run_cli("keygen --seed " + std::string(kSeedA) + " --out " + quoted(key)) == 0);
  const std::string text = "thirty-two bytes of masked text!";
  spit(pt, std::vector<std::uint8_t>(text.begin(), text.end()));
  REQUIRE(run_cli("encrypt --scheme masked --key " + quoted(key) + " --in " + quoted(pt) +
                  " --out " + quoted(ct)) == 0);
  CHECK(slurp(ct)[4] == 1);
  REQUIRE(run_cli("decrypt --key " + quoted(key) + " --in " + quoted(ct) + " --out " +
                  quoted(back)) == 0);
  CHECK(slurp(back) == slurp(pt));
}

TEST_CASE("decrypt rejects damaged or mismatched streams") {
  TempDir dir;
  const fs::path key = dir.path / "k.key";
  const fs::path pt = dir.path / "pt.bin";
  const fs::path ct = dir.path / "ct.bin";
  const fs::path out = dir.path / "out.bin";
  REQUIRE(run_cli("keygen --seed " + std::string(kSeedB) + " --out " + quoted(key)) == 0);
  spit(pt, std::vector<std::uint8_t>{'h', 'e', 'l', 'l', 'o'});
  REQUIRE(run_cli("encrypt --key " + quoted(key) + " --in " + quoted(pt) + " --out " +
                  quoted(ct)) == 0);

  SUBCASE("bad magic") {
    std::vector<std::uint8_t> blob = slurp(ct);
    blob[0] = 'X';
    spit(ct, blob);
    CHECK(run_cli("decrypt --key " + quoted(key) + " --in " + quoted(ct) + " --out " +
                  quoted(out)) == 1);
  }
  SUBCASE("truncated header") {
    std::vector<std::uint8_t> blob = slurp(ct);
    blob.resize(10);
    spit(ct, blob);
    CHECK(run_cli("decrypt --key " + quoted(key) + " --in " + quoted(ct) + " --out " +
                  quoted(out)) == 1);
  }
  SUBCASE("scheme expectation not met") {
    CHECK(run_cli("decrypt --scheme masked --key " + quoted(key) + " --in " + quoted(ct) +
                  " --out " + quoted(out)) == 1);
  }
  SUBCASE("missing ciphertext") {
    CHECK(run_cli("decrypt --key " + quoted(key) + " --in " + quoted(dir.path / "nope.bin") +
                  " --out " + quoted(out)) == 1);
  }
  SUBCASE("missing key file") {
    CHECK(run_cli("encrypt --key " + quoted(dir.path / "nope.key") + " --in " + quoted(pt) +
                  " --out " + quoted(out)) == 1);
  }
}

TEST_CASE("analysis subcommands write their reports") {
  TempDir dir;
  const fs::path key = dir.path / "a.key";
  REQUIRE(run_cli("keygen --seed " + std::string(kSeedA) + " --out " + quoted(key)) == 0);

  SUBCASE("analyze-dist") {
    const fs::path report = dir.path / "dist.txt";
    const fs::path csv = dir.path / "dist.csv";
    REQUIRE(run_cli("analyze-dist --key " + quoted(key) + " --trials 2000 --seed " +
                    std::string(kMcSeed) + " --out " + quoted(report) + " --csv " +
                    quoted(csv)) == 0);
    const std::string text = slurp_text(report);
    CHECK(text.find("geometric fit") != std::string::npos);
    CHECK(text.find("-> pass") != std::string::npos);
    // The raw iteration counts leak the geometric law; the report is
    // expected to flag their non-uniformity.
    CHECK(text.find("-> FAIL") != std::string::npos);
    CHECK(slurp_text(csv).rfind("sample,count,token", 0) == 0);
  }
  SUBCASE("analyze-error") {
    const fs::path report = dir.path / "err.txt";
    REQUIRE(run_cli("analyze-error --key " + quoted(key) +
                    " --scheme rectified --trials 100 --len 4 --seed " + std::string(kMcSeed) +
                    " --out " + quoted(report)) == 0);
    const std::string text = slurp_text(report);
    CHECK(text.find("rectified") != std::string::npos);
    CHECK(text.find("1.000000") != std::string::npos);  // exact recovery everywhere
  }
  SUBCASE("analyze-map") {
    const fs::path report = dir.path / "map.txt";
    REQUIRE(run_cli("analyze-map --key " + quoted(key) + " --out " + quoted(report)) == 0);
    const std::string text = slurp_text(report);
    CHECK(text.find("lyapunov exponent") != std::string::npos);
    CHECK(text.find("autocorrelation lag 8") != std::string::npos);
  }
}

TEST_CASE("golden fixtures stay byte-stable") {
  // These files pin the wire format and the orbit arithmetic. If any of
  // them stops matching, released ciphertexts have silently become
  // unreadable; treat that as a format break, not a test to update.
  const fs::path fixtures = BAPTISTA_FIXTURE_DIR;
  const fs::path key = fixtures / "golden.key";
  const fs::path pt = fixtures / "golden.pt";
  REQUIRE(fs::exists(key));
  REQUIRE(fs::exists(pt));
  const std::vector<std::uint8_t> message = slurp(pt);

  struct Fixture {
    const char* file;
    const char* args;
  };
  const Fixture entries[] = {
      {"golden.original.bin", "--scheme original"},
      {"golden.masked.bin", "--scheme masked"},
      {"golden.rectified.bin", "--scheme rectified"},
      {"golden.compressed.bin", "--scheme rectified --encoding compressed"},
  };
  TempDir dir;
  for (const Fixture& fx : entries) {
    CAPTURE(fx.file);
    const fs::path frozen = fixtures / fx.file;
    REQUIRE(fs::exists(frozen));

    const fs::path ct = dir.path / "fresh.bin";
    REQUIRE(run_cli("encrypt --key " + quoted(key) + " --in " + quoted(pt) + " --out " +
                    quoted(ct) + " " + fx.args) == 0);
    CHECK(slurp(ct) == slurp(frozen));

    const fs::path back = dir.path / "back.bin";
    REQUIRE(run_cli("decrypt --key " + quoted(key) + " --in " + quoted(frozen) + " --out " +
                    quoted(back)) == 0);
    CHECK(slurp(back) == message);
  }
}
