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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace baptista;

namespace {

KeyMaterial tent_key() {
  KeyMaterial key;
  key.map = MapSpec::skew_tent(0.37);
  key.x0 = 0.33;
  key.assoc_seed = Seed128{0xAAAABBBBCCCCDDDDull, 0x1111222233334444ull};
  key.perturb = PerturbConfig{true, 16, 0xFACEull, 8};
  return key;
}

}  // namespace

TEST_CASE("single-count survival probability") {
  CHECK(pc_single(250, 16, 250) == 1.0);
  CHECK(pc_single(251, 16, 250) == 1.0 - 0x1p-16);
  CHECK(pc_single(300, 16, 250) < pc_single(299, 16, 250));
  CHECK_THROWS_AS(pc_single(10, 16, 250), std::invalid_argument);
}

TEST_CASE("first-character survival matches the direct sum") {
  // At the default parameters the closed form reproduces the known value
  // bit for bit (it equals 65536/65791 up to the truncated tail).
  const double pc1 = pc_first(256, 16, 250, 65532);
  CHECK(pc1 == 0.9961240899211138);

  // Direct summation of p * q^j over the count range, long double
  // accumulation, no closed form anywhere.
  const long double p = 1.0L / 256.0L;
  const long double q = (1.0L - p) * (1.0L - std::ldexp(1.0L, -16));
  long double sum = 0.0L;
  long double term = p;
  for (std::uint32_t j = 0; j <= 65532 - 250; ++j) {
    sum += term;
    term *= q;
  }
  CHECK(std::abs(pc1 - static_cast<double>(sum)) / static_cast<double>(sum) < 1e-12);

  CHECK_THROWS_AS(pc_first_from_p(0.0, 16, 250, 65532), std::invalid_argument);
  CHECK_THROWS_AS(pc_first_from_p(0.5, 16, 300, 300), std::invalid_argument);
}

TEST_CASE("per-position survival decays geometrically") {
  CHECK(pc_position(0, 0.9) == 1.0);
  CHECK(pc_position(1, 0.9) == 0.9);
  CHECK(pc_position(2, 0.5) == 0.25);
  CHECK_THROWS_AS(pc_position(1, 1.5), std::invalid_argument);
}

TEST_CASE("uniform chi-square agrees with hand-worked values") {
  // Two bins, 12 and 8 observations: statistic (2^2 + 2^2) / 10 = 0.8.
  const std::vector<std::uint64_t> bins{12, 8};
  const ChiSquare r = chi_square_uniform(bins);
  CHECK(r.statistic == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.dof == 1);
  CHECK(r.critical_1pct == doctest::Approx(6.6348966010212145).epsilon(1e-8));
  CHECK(r.pass_1pct);

  CHECK_THROWS_AS(chi_square_uniform(std::vector<std::uint64_t>{3}), std::invalid_argument);
  CHECK_THROWS_AS(chi_square_uniform(std::vector<std::uint64_t>{2, 2}), std::invalid_argument);
}

TEST_CASE("chi-square quantiles match an external table") {
  const std::vector<std::uint64_t> flat(256, 1000);
  const ChiSquare r = chi_square_uniform(flat);
  CHECK(r.statistic == 0.0);
  CHECK(r.dof == 255);
  CHECK(r.critical_1pct == doctest::Approx(310.45738821990585).epsilon(1e-8));
  CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform chi-square separates flat from skewed data") {
  SplitMix64 rng(71);
  std::vector<std::uint64_t> flat(256, 0);
  for (int i = 0; i < 100000; ++i) ++flat[uniform_below(rng, 256)];
  CHECK(chi_square_uniform(flat).pass_1pct);

  std::vector<std::uint64_t> skewed = flat;
  skewed[0] += skewed[1] / 2;  // move an eighth of one bin next door
  skewed[1] -= skewed[1] / 2;
  CHECK_FALSE(chi_square_uniform(skewed).pass_1pct);
}

TEST_CASE("geometric fit accepts geometric data and rejects uniform data") {
  // Inversion sampling with an independent formula: W = floor(ln u / ln q).
  SplitMix64 rng(72);
  const double q = 1.0 - 1.0 / 257.0;
  std::vector<std::uint32_t> counts(30000);
  for (std::uint32_t& c : counts) {
    double u = to_unit_double(rng.next());
    if (u == 0.0) u = 0.5;
    c = 250 + static_cast<std::uint32_t>(std::log(u) / std::log(q));
  }
  const ChiSquare good = chi_square_geometric(counts, 250);
  CHECK(good.pass_1pct);
  CHECK(good.dof >= 3);

  std::vector<std::uint32_t> uniform(30000);
  for (std::uint32_t& c : uniform) {
    c = 250 + static_cast<std::uint32_t>(uniform_below(rng, 512));
  }
  CHECK_FALSE(chi_square_geometric(uniform, 250).pass_1pct);

  CHECK_THROWS_AS(chi_square_geometric(std::vector<std::uint32_t>(10, 300), 250),
                  std::invalid_argument);
  CHECK_THROWS_AS(chi_square_geometric(std::vector<std::uint32_t>(2000, 100), 250),
                  std::invalid_argument);
}

TEST_CASE("orbit samples equal a manual loop") {
  const MapSpec map = MapSpec::skew_tent(0.41);
  const PerturbConfig perturb{true, 16, 9, 8};
  const std::vector<double> samples = orbit_samples(map, perturb, 0.3, 100);
  REQUIRE(samples.size() == 100);
  OrbitState st = initial_state(0.3, perturb);
  for (const double s : samples) {
    st = iterate(st, map, perturb);
    CHECK(st.x == s);
  }
}

TEST_CASE("occupancy separates flat from peaked invariant densities") {
  const PerturbConfig perturb{true, 16, 13, 8};
  const OccupancyReport tent =
      occupancy_test(MapSpec::skew_tent(0.37), perturb, 0.33, 200000, 64);
  CHECK(tent.within_5_sigma);
  CHECK(tent.expected == doctest::Approx(200000.0 / 64.0));

  // The logistic invariant density blows up at both edges; its first and
  // last bins hold several times the uniform expectation.
  const OccupancyReport logistic =
      occupancy_test(MapSpec::logistic(4.0), perturb, 0.33, 200000, 64);
  CHECK_FALSE(logistic.within_5_sigma);
  CHECK(logistic.max_abs_z > 20.0);

  CHECK_THROWS_AS(occupancy_test(MapSpec::skew_tent(0.5), perturb, 0.3, 50, 64),
                  std::invalid_argument);
}

TEST_CASE("autocorrelation of the skew tent decays like (2p - 1)^k") {
  const PerturbConfig perturb{true, 16, 17, 8};
  const std::vector<double> orbit = orbit_samples(MapSpec::skew_tent(0.37), perturb, 0.4, 200000);
  const std::vector<double> tau = autocorrelation(orbit, 4);
  REQUIRE(tau.size() == 4);
  // The sampling noise of each estimate sits near 0.002 at this length, so
  // an absolute band of 0.01 is a sharp check at lag 1 (theory -0.26) and
  // still meaningful at lag 4 (theory 0.0046).
  const double r = 2.0 * 0.37 - 1.0;
  for (std::size_t lag = 1; lag <= 4; ++lag) {
    CHECK(std::abs(tau[lag - 1] - std::pow(r, static_cast<double>(lag))) < 0.01);
  }
  CHECK(tau[0] < -0.2);  // clearly anticorrelated at lag 1
}

TEST_CASE("autocorrelation edge cases") {
  std::vector<double> alternating(1000);
  for (std::size_t i = 0; i < alternating.size(); ++i) {
    alternating[i] = i % 2 ? 1.0 : -1.0;
  }
  const std::vector<double> tau = autocorrelation(alternating, 2);
  CHECK(tau[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(tau[1] == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(autocorrelation(std::vector<double>(100, 0.5), 2), std::invalid_argument);
  CHECK_THROWS_AS(autocorrelation(std::vector<double>{1.0, 2.0}, 5), std::invalid_argument);
}

TEST_CASE("measured hit probability approaches the interval share") {
  const KeyMaterial key = tent_key();
  const Partition part = partition_for(key);
  const double p_hat = measure_hit_probability(key, part, 1u << 20);
  // The visiting interval holds 0.9 of a uniform invariant density split
  // over 256 cells.
  CHECK(p_hat == doctest::Approx(0.9 / 256.0).epsilon(0.01));
  CHECK_THROWS_AS(measure_hit_probability(key, part, 10), std::invalid_argument);
}

TEST_CASE("single-character sampling is deterministic and well-ranged") {
  const KeyMaterial key = tent_key();
  const Seed128 mc{5, 6};
  const TokenSamples a = sample_single_char_tokens(key, 3000, mc);
  const TokenSamples b = sample_single_char_tokens(key, 3000, mc);
  CHECK(a.counts == b.counts);
  CHECK(a.tokens == b.tokens);
  REQUIRE(a.counts.size() == 3000);
  double mean = 0.0;
  for (std::size_t i = 0; i < a.counts.size(); ++i) {
    CHECK(a.counts[i] >= key.n0);
    CHECK(a.tokens[i] <= 0xFFFFu);
    mean += a.counts[i];
  }
  mean /= static_cast<double>(a.counts.size());
  // Expected mean count is n0 + 1/p - 1 with p = 0.9 / 256; three sigma of
  // the sample mean is about 16 here.
  CHECK(mean == doctest::Approx(250.0 + 256.0 / 0.9 - 1.0).epsilon(0.06));
}

TEST_CASE("error rates: exact variants decode everything, masked decays") {
  const KeyMaterial key = tent_key();
  const Seed128 mc{7, 8};
  for (const CipherVariant variant : {CipherVariant::Original, CipherVariant::Rectified}) {
    const ErrorRateReport r = error_rate_by_position(key, variant, 8, 150, mc);
    CHECK(r.desyncs == 0);
    for (const double rate : r.rate) CHECK(rate == 1.0);
  }

  const ErrorRateReport masked = error_rate_by_position(key, CipherVariant::Masked, 10, 3000, mc);
  CHECK(masked.trials == 3000);
  // The visiting interval spans 0.9 of a uniform invariant density, so the
  // measured per-cell probability sits at 0.9/256 and the survival theory
  // follows from it.
  CHECK(masked.p_hat == doctest::Approx(0.9 / 256.0).epsilon(0.02));
  CHECK(masked.pc1_theory ==
        doctest::Approx(pc_first_from_p(0.9 / 256.0, 16, 250, 65532)).epsilon(1e-4));
  for (std::size_t i = 0; i < masked.theory.size(); ++i) {
    CHECK(masked.theory[i] ==
          doctest::Approx(std::pow(masked.pc1_theory, static_cast<double>(i + 1))));
    CHECK(masked.rate[i] <= 1.0);
  }
  // Within five binomial sigma at 3000 trials: a loose but stable band.
  const double sigma1 =
      std::sqrt(masked.pc1_theory * (1.0 - masked.pc1_theory) / 3000.0);
  CHECK(std::abs(masked.rate[0] - masked.pc1_theory) < 5.0 * sigma1);
}
