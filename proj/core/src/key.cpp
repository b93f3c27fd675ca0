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

#include "baptista/key.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "baptista/errors.hpp"

namespace baptista {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(std::string_view name, std::string_view text) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw KeyFormatError("key field '" + std::string(name) + "' is not a number: '" +
                         std::string(text) + "'");
  }
  return v;
}

std::uint32_t parse_u32(std::string_view name, std::string_view text) {
  std::uint32_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw KeyFormatError("key field '" + std::string(name) + "' is not an unsigned integer: '" +
                         std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_hex_u64(std::string_view name, std::string_view text) {
  if (text.size() != 16) {
    throw KeyFormatError("key field '" + std::string(name) + "' must be 16 hex digits");
  }
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw KeyFormatError("key field '" + std::string(name) + "' is not hexadecimal");
  }
  return v;
}

bool parse_bool(std::string_view name, std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw KeyFormatError("key field '" + std::string(name) + "' must be 'true' or 'false'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string format_branches(const std::vector<PwlcmBranch>& branches) {
  std::string out;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(branches[i].hi);
    out += branches[i].ascending ? ":up" : ":down";
  }
  return out;
}

std::vector<PwlcmBranch> parse_branches(std::string_view text) {
  std::vector<PwlcmBranch> branches;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    std::string_view entry = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const std::size_t colon = entry.find(':');
    if (colon == std::string_view::npos) {
      throw KeyFormatError("breakpoints entries must look like '0.3:up' or '0.7:down'");
    }
    PwlcmBranch br;
    br.hi = parse_double("breakpoints", trim(entry.substr(0, colon)));
    const std::string_view dir = trim(entry.substr(colon + 1));
    if (dir == "up") {
      br.ascending = true;
    } else if (dir == "down") {
      br.ascending = false;
    } else {
      throw KeyFormatError("breakpoints direction must be 'up' or 'down'");
    }
    branches.push_back(br);
  }
  if (branches.empty()) throw KeyFormatError("breakpoints list is empty");
  return branches;
}

}  // namespace

std::string format_seed128(const Seed128& seed) {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx",
                static_cast<unsigned long long>(seed.hi),
                static_cast<unsigned long long>(seed.lo));
  return std::string(buf, 32);
}

Seed128 parse_seed128(const std::string& hex) {
  if (hex.size() != 32) {
    throw KeyFormatError("seed must be exactly 32 hex digits");
  }
  const std::string_view sv = hex;
  return Seed128{parse_hex_u64("seed", sv.substr(0, 16)), parse_hex_u64("seed", sv.substr(16))};
}

void KeyMaterial::validate() const {
  try {
    map.validate();
    if (perturb.enabled) perturb.validate();
  } catch (const std::invalid_argument& e) {
    throw KeyFormatError(e.what());
  }
  if (n_bits < 8 || n_bits > 16) {
    throw KeyFormatError("n_bits must lie in [8, 16]");
  }
  if (n0 < 1 || n0 >= nmax) {
    throw KeyFormatError("counts must satisfy 1 <= n0 < nmax");
  }
  if (nmax >= (1u << n_bits)) {
    throw KeyFormatError("nmax must be smaller than 2^n_bits");
  }
  if (!(x0 >= 0.0 && x0 <= 1.0)) {
    throw KeyFormatError("x0 must lie in the defining interval [0, 1]");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw KeyFormatError("eta must lie in [0, 1]");
  }
}

KeyMaterial generate_key(const Seed128& master_seed) {
  SplitMix64 rng(domain_seed(master_seed, RngDomain::Keygen));
  KeyMaterial key;
  // Keep the apex and the initial condition away from the interval edges;
  // extreme skews thin out one side of the partition and slow the search.
  key.map = MapSpec::skew_tent(0.15 + 0.7 * to_unit_double(rng.next()));
  key.x0 = 0.1 + 0.8 * to_unit_double(rng.next());
  key.assoc_seed = Seed128{rng.next(), rng.next()};
  key.perturb.prng_seed = rng.next();
  key.validate();
  return key;
}

std::string format_key(const KeyMaterial& key) {
  std::string out;
  out += "map_kind = ";
  switch (key.map.kind) {
    case MapKind::Logistic:
      out += "logistic\nb = " + fmt_double(key.map.b) + '\n';
      break;
    case MapKind::SkewTent:
      out += "skew_tent\np = " + fmt_double(key.map.p) + '\n';
      break;
    case MapKind::Pwlcm:
      out += "pwlcm\nbreakpoints = " + format_branches(key.map.branches) + '\n';
      break;
  }
  out += "x0 = " + fmt_double(key.x0) + '\n';
  out += "assoc_seed = " + format_seed128(key.assoc_seed) + '\n';
  out += "eta = " + fmt_double(key.eta) + '\n';
  out += "n0 = " + std::to_string(key.n0) + '\n';
  out += "nmax = " + std::to_string(key.nmax) + '\n';
  out += "n_bits = " + std::to_string(key.n_bits) + '\n';
  out += "perturb_delta = " + std::to_string(key.perturb.enabled ? key.perturb.delta : 0) + '\n';
  char seedbuf[17];
  std::snprintf(seedbuf, sizeof seedbuf, "%016llx",
                static_cast<unsigned long long>(key.perturb.prng_seed));
  out += "perturb_seed = " + std::string(seedbuf, 16) + '\n';
  out += "perturb_bits = " + std::to_string(key.perturb.magnitude_bits) + '\n';
  out += std::string("mask_enabled = ") + (key.mask_enabled ? "true" : "false") + '\n';
  return out;
}

KeyMaterial parse_key(const std::string& text) {
  std::map<std::string, std::string, std::less<>> fields;
  std::istringstream lines(text);
  std::string raw;
  while (std::getline(lines, raw)) {
    std::string_view line = raw;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw KeyFormatError("key line is not 'name = value': '" + raw + "'");
    }
    const std::string name(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (name.empty() || value.empty()) {
      throw KeyFormatError("key line has an empty name or value: '" + raw + "'");
    }
    if (!fields.emplace(name, value).second) {
      throw KeyFormatError("key field '" + name + "' appears twice");
    }
  }

  auto take = [&fields](std::string_view name) -> std::string {
    auto it = fields.find(name);
    if (it == fields.end()) {
      throw KeyFormatError("key field '" + std::string(name) + "' is missing");
    }
    std::string value = std::move(it->second);
    fields.erase(it);
    return value;
  };

  KeyMaterial key;
  const std::string kind = take("map_kind");
  if (kind == "logistic") {
    key.map.kind = MapKind::Logistic;
    key.map.b = parse_double("b", take("b"));
  } else if (kind == "skew_tent") {
    key.map.kind = MapKind::SkewTent;
    key.map.p = parse_double("p", take("p"));
  } else if (kind == "pwlcm") {
    key.map.kind = MapKind::Pwlcm;
    key.map.branches = parse_branches(take("breakpoints"));
  } else {
    throw KeyFormatError("map_kind must be logistic, skew_tent or pwlcm");
  }
  key.x0 = parse_double("x0", take("x0"));
  key.assoc_seed = parse_seed128(take("assoc_seed"));
  key.eta = parse_double("eta", take("eta"));
  key.n0 = parse_u32("n0", take("n0"));
  key.nmax = parse_u32("nmax", take("nmax"));
  key.n_bits = parse_u32("n_bits", take("n_bits"));
  const std::uint32_t delta = parse_u32("perturb_delta", take("perturb_delta"));
  key.perturb.enabled = delta > 0;
  key.perturb.delta = delta > 0 ? delta : 1;
  if (key.perturb.enabled || fields.count("perturb_seed")) {
    key.perturb.prng_seed = parse_hex_u64("perturb_seed", take("perturb_seed"));
  }
  if (key.perturb.enabled || fields.count("perturb_bits")) {
    key.perturb.magnitude_bits = parse_u32("perturb_bits", take("perturb_bits"));
  }
  key.mask_enabled = parse_bool("mask_enabled", take("mask_enabled"));

  if (!fields.empty()) {
    throw KeyFormatError("unknown key field '" + fields.begin()->first + "'");
  }
  key.validate();
  return key;
}

KeyMaterial load_key_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw KeyFormatError("cannot open key file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw KeyFormatError("cannot read key file: " + path.string());
  }
  return parse_key(buf.str());
}

void save_key_file(const KeyMaterial& key, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open key file for writing: " + path.string());
  }
  out << format_key(key);
  out.flush();
  if (!out) {
    throw Error("cannot write key file: " + path.string());
  }
}

Partition partition_for(const KeyMaterial& key, std::uint32_t s) {
  const VisitingInterval iv = default_visiting_interval(key.map.kind);
  return Partition::make(iv.lo, iv.hi, s, key.assoc_seed);
}

}  // namespace baptista
