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

#include "baptista/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "baptista/errors.hpp"

namespace baptista {

double pc_single(std::uint64_t count, std::uint32_t n_bits, std::uint32_t n0) {
  if (count < n0) throw std::invalid_argument("count below n0");
  const double base = 1.0 - std::ldexp(1.0, -static_cast<int>(n_bits));
  return std::pow(base, static_cast<double>(count - n0));
}

double pc_first_from_p(double p, std::uint32_t n_bits, std::uint32_t n0, std::uint32_t nmax) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  if (n0 >= nmax) throw std::invalid_argument("n0 must be below nmax");
  const double no_collision = 1.0 - std::ldexp(1.0, -static_cast<int>(n_bits));
  const double q = (1.0 - p) * no_collision;
  const double terms = static_cast<double>(nmax - n0) + 1.0;
  return p * (1.0 - std::pow(q, terms)) / (1.0 - q);
}

double pc_first(std::uint32_t s, std::uint32_t n_bits, std::uint32_t n0, std::uint32_t nmax) {
  if (s < 2) throw std::invalid_argument("alphabet needs at least two symbols");
  return pc_first_from_p(1.0 / static_cast<double>(s), n_bits, n0, nmax);
}

double pc_position(std::uint32_t i, double pc1) {
  if (!(pc1 >= 0.0 && pc1 <= 1.0)) throw std::invalid_argument("pc1 must lie in [0, 1]");
  return std::pow(pc1, static_cast<double>(i));
}

namespace {

ChiSquare finish_chi_square(double statistic, std::uint32_t dof) {
  const boost::math::chi_squared dist(static_cast<double>(dof));
  ChiSquare r;
  r.statistic = statistic;
  r.dof = dof;
  r.critical_1pct = boost::math::quantile(dist, 0.99);
  r.p_value = boost::math::cdf(boost::math::complement(dist, statistic));
  r.pass_1pct = statistic < r.critical_1pct;
  return r;
}

}  // namespace

ChiSquare chi_square_uniform(std::span<const std::uint64_t> bin_counts) {
  if (bin_counts.size() < 2) throw std::invalid_argument("need at least two bins");
  std::uint64_t total = 0;
  for (const std::uint64_t c : bin_counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(bin_counts.size());
  if (expected < 5.0) throw std::invalid_argument("expected bin occupancy below 5; add samples");
  double stat = 0.0;
  for (const std::uint64_t c : bin_counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return finish_chi_square(stat, static_cast<std::uint32_t>(bin_counts.size()) - 1);
}

ChiSquare chi_square_geometric(std::span<const std::uint32_t> counts, std::uint32_t n0) {
  if (counts.size() < 1000) throw std::invalid_argument("need at least 1000 samples");
  std::uint64_t sum = 0;
  std::uint32_t max_w = 0;
  for (const std::uint32_t c : counts) {
    if (c < n0) throw std::invalid_argument("count below n0");
    const std::uint32_t w = c - n0;
    sum += w;
    max_w = std::max(max_w, w);
  }
  const double n = static_cast<double>(counts.size());
  const double mean = static_cast<double>(sum) / n;
  const double p_hat = 1.0 / (mean + 1.0);
  const double q = 1.0 - p_hat;

  std::vector<std::uint64_t> hist(static_cast<std::size_t>(max_w) + 1, 0);
  for (const std::uint32_t c : counts) ++hist[c - n0];

  // Pool consecutive values until each bin expects at least 5 under the
  // fitted law, then fold the infinite tail into the end.
  std::vector<double> expected;
  std::vector<double> observed;
  double acc_e = 0.0;
  double acc_o = 0.0;
  double geo = n * p_hat;  // expected count of W == k, starting at k = 0
  for (std::uint32_t k = 0; k <= max_w; ++k) {
    acc_e += geo;
    acc_o += static_cast<double>(hist[k]);
    geo *= q;
    if (acc_e >= 5.0) {
      expected.push_back(acc_e);
      observed.push_back(acc_o);
      acc_e = acc_o = 0.0;
    }
  }
  acc_e += n * std::pow(q, static_cast<double>(max_w) + 1.0);  // P{W > max_w}
  if (expected.empty()) {
    throw std::invalid_argument("samples too degenerate for a geometric fit");
  }
  if (acc_e >= 5.0) {
    expected.push_back(acc_e);
    observed.push_back(acc_o);
  } else {
    expected.back() += acc_e;
    observed.back() += acc_o;
  }
  if (expected.size() < 3) {
    throw std::invalid_argument("too few bins for a geometric fit; add samples");
  }

  double stat = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return finish_chi_square(stat, static_cast<std::uint32_t>(expected.size()) - 2);
}

std::vector<double> orbit_samples(const MapSpec& map, const PerturbConfig& perturb, double x0,
                                  std::uint64_t n) {
  map.validate();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  OrbitState st = initial_state(x0, perturb);
  for (std::uint64_t i = 0; i < n; ++i) {
    st = iterate(st, map, perturb);
    out.push_back(st.x);
  }
  return out;
}

OccupancyReport occupancy_test(const MapSpec& map, const PerturbConfig& perturb, double x0,
                               std::uint64_t iters, std::uint32_t bins) {
  map.validate();
  if (bins < 2) throw std::invalid_argument("need at least two bins");
  if (iters < 100ull * bins) throw std::invalid_argument("too few iterates for the bin count");
  OccupancyReport report;
  report.histogram.assign(bins, 0);
  OrbitState st = initial_state(x0, perturb);
  for (std::uint64_t i = 0; i < iters; ++i) {
    st = iterate(st, map, perturb);
    auto idx = static_cast<std::uint32_t>(st.x * static_cast<double>(bins));
    if (idx >= bins) idx = bins - 1;
    ++report.histogram[idx];
  }
  const double pbin = 1.0 / static_cast<double>(bins);
  report.expected = static_cast<double>(iters) * pbin;
  const double sigma = std::sqrt(static_cast<double>(iters) * pbin * (1.0 - pbin));
  for (const std::uint64_t h : report.histogram) {
    const double z = std::abs(static_cast<double>(h) - report.expected) / sigma;
    report.max_abs_z = std::max(report.max_abs_z, z);
  }
  report.within_5_sigma = report.max_abs_z < 5.0;
  return report;
}

std::vector<double> autocorrelation(std::span<const double> series, std::uint32_t max_lag) {
  if (max_lag < 1) throw std::invalid_argument("max_lag must be positive");
  if (series.size() < 2ull * max_lag + 2ull) {
    throw std::invalid_argument("series too short for the requested lag");
  }
  const std::size_t n = series.size();
  double mean = 0.0;
  for (const double x : series) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const double x : series) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n);
  if (!(var > 0.0)) throw std::invalid_argument("series has no variance");

  std::vector<double> out;
  out.reserve(max_lag);
  for (std::uint32_t lag = 1; lag <= max_lag; ++lag) {
    double cov = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      cov += (series[i] - mean) * (series[i + lag] - mean);
    }
    cov /= static_cast<double>(n - lag);
    out.push_back(cov / var);
  }
  return out;
}

double measure_hit_probability(const KeyMaterial& key, const Partition& partition,
                               std::uint64_t iters) {
  if (iters < 1000) throw std::invalid_argument("too few iterates to estimate occupancy");
  OrbitState st = initial_state(key.x0, key.perturb);
  std::uint64_t in_range = 0;
  for (std::uint64_t i = 0; i < iters; ++i) {
    st = iterate(st, key.map, key.perturb);
    if (partition.cell_of(st.x) != kBeta) ++in_range;
  }
  const double occupancy = static_cast<double>(in_range) / static_cast<double>(iters);
  return occupancy / static_cast<double>(partition.s);
}

TokenSamples sample_single_char_tokens(const KeyMaterial& key, std::uint64_t trials,
                                       const Seed128& mc_seed) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  key.validate();
  const Partition partition = partition_for(key);
  TokenSamples out;
  out.counts.reserve(static_cast<std::size_t>(trials));
  out.tokens.reserve(static_cast<std::size_t>(trials));
  SplitMix64 rng(domain_seed(mc_seed, RngDomain::MonteCarlo));
  for (std::uint64_t t = 0; t < trials; ++t) {
    KeyMaterial trial_key = key;
    trial_key.x0 = to_unit_double(rng.next());
    const auto m = static_cast<Symbol>(uniform_below(rng, partition.s));
    EncryptSession enc(trial_key, partition, CipherVariant::Original);
    const CipherUnit unit = enc.encrypt_symbol(m);
    if (unit.overflow) continue;  // astronomically rare at sane parameters
    out.counts.push_back(unit.count);
    out.tokens.push_back(unit.count ^ f_be(enc.state().x, key.n_bits));
  }
  return out;
}

ErrorRateReport error_rate_by_position(const KeyMaterial& key, CipherVariant variant,
                                       std::uint32_t message_len, std::uint64_t trials,
                                       const Seed128& mc_seed) {
  if (message_len < 1) throw std::invalid_argument("message_len must be positive");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  key.validate();
  const Partition partition = partition_for(key);
  ErrorRateReport report;
  report.trials = trials;
  report.correct.assign(message_len, 0);
  report.p_hat = measure_hit_probability(key, partition, 1u << 18);
  report.pc1_theory = pc_first_from_p(report.p_hat, key.n_bits, key.n0, key.nmax);

  SplitMix64 rng(domain_seed(mc_seed, RngDomain::MonteCarlo));
  std::vector<Symbol> message(message_len);
  for (std::uint64_t t = 0; t < trials; ++t) {
    KeyMaterial trial_key = key;
    trial_key.x0 = to_unit_double(rng.next());
    for (Symbol& m : message) m = static_cast<Symbol>(uniform_below(rng, partition.s));
    EncryptSession enc(trial_key, partition, variant);
    DecryptSession dec(trial_key, partition, variant);
    for (std::uint32_t i = 0; i < message_len; ++i) {
      const CipherUnit unit = enc.encrypt_symbol(message[i]);
      std::uint32_t sym;
      try {
        sym = dec.decrypt_unit(unit);
      } catch (const DesyncError&) {
        ++report.desyncs;
        break;  // this and all later positions stay counted as wrong
      }
      if (sym == message[i]) ++report.correct[i];
    }
  }

  report.rate.resize(message_len);
  report.theory.resize(message_len);
  for (std::uint32_t i = 0; i < message_len; ++i) {
    report.rate[i] =
        static_cast<double>(report.correct[i]) / static_cast<double>(report.trials);
    report.theory[i] = pc_position(i + 1, report.pc1_theory);
  }
  return report;
}

}  // namespace baptista
