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

#include "baptista/cipher.hpp"
#include "baptista/key.hpp"

namespace baptista {

// Statistical companions to the ciphers: the closed-form collision
// probabilities of the masked variant, goodness-of-fit machinery for token
// distributions, and Monte Carlo drivers that measure what the formulas
// predict.

// --- closed forms -------------------------------------------------------

/// Probability that a masked count survives decryption undamaged: no
/// earlier scan step collides with the token, i.e. (1 - 2^-n)^(count - n0).
double pc_single(std::uint64_t count, std::uint32_t n_bits, std::uint32_t n0);

/// First-character survival probability, averaged over the geometric count
/// law with per-cell hit probability p: sum of p*q^j for j = 0..nmax-n0
/// with q = (1-p)(1-2^-n), in closed form.
double pc_first_from_p(double p, std::uint32_t n_bits, std::uint32_t n0, std::uint32_t nmax);

/// pc_first_from_p with the ideal p = 1/s.
double pc_first(std::uint32_t s, std::uint32_t n_bits, std::uint32_t n0, std::uint32_t nmax);

/// Survival through position i: independence makes it pc1^i.
double pc_position(std::uint32_t i, double pc1);

// --- goodness of fit ----------------------------------------------------

struct ChiSquare {
  double statistic = 0.0;
  std::uint32_t dof = 0;
  double critical_1pct = 0.0;
  double p_value = 1.0;
  bool pass_1pct = false;  // statistic below the 1% critical value
};

/// Equal-expectation test over pre-binned data; dof = bins - 1.
ChiSquare chi_square_uniform(std::span<const std::uint64_t> bin_counts);

/// Fit of iteration counts to the geometric law. The success probability is
/// estimated from the sample mean, per-value bins are pooled from the tail
/// up so every expectation is at least 5, and dof = bins - 2 (total plus
/// the estimated parameter). Needs at least 1000 samples, each >= n0.
ChiSquare chi_square_geometric(std::span<const std::uint32_t> counts, std::uint32_t n0);

// --- orbit diagnostics --------------------------------------------------

/// x values of `n` consecutive iterations starting from x0 (x0 excluded).
std::vector<double> orbit_samples(const MapSpec& map, const PerturbConfig& perturb, double x0,
                                  std::uint64_t n);

struct OccupancyReport {
  std::vector<std::uint64_t> histogram;
  double expected = 0.0;   // per-bin expectation under uniformity
  double max_abs_z = 0.0;  // worst bin deviation in binomial sigmas
  bool within_5_sigma = false;
};

/// Histogram of `iters` iterates over equal bins of [0, 1] with the worst
/// per-bin deviation from uniformity.
OccupancyReport occupancy_test(const MapSpec& map, const PerturbConfig& perturb, double x0,
                               std::uint64_t iters, std::uint32_t bins);

/// Empirical normalized autocovariance at lags 1..max_lag (sample mean and
/// variance). Throws on a constant series.
std::vector<double> autocorrelation(std::span<const double> series, std::uint32_t max_lag);

/// Measured per-cell hit probability: the fraction of a free orbit landing
/// inside the visiting interval, divided by the cell count. For maps with
/// uniform invariant density this estimates the p of the count law.
double measure_hit_probability(const KeyMaterial& key, const Partition& partition,
                               std::uint64_t iters);

// --- Monte Carlo drivers ------------------------------------------------

/// Emissions from independent single-character encryptions (fresh x0 and
/// fresh symbol per trial): the plain iteration counts and the masked
/// tokens of the very same emissions.
struct TokenSamples {
  std::vector<std::uint32_t> counts;
  std::vector<std::uint32_t> tokens;
};
TokenSamples sample_single_char_tokens(const KeyMaterial& key, std::uint64_t trials,
                                       const Seed128& mc_seed);

struct ErrorRateReport {
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> correct;  // per position
  std::vector<double> rate;            // correct / trials
  std::vector<double> theory;          // pc1^(position+1)
  double p_hat = 0.0;                  // measured per-cell hit probability
  double pc1_theory = 0.0;
  std::uint64_t desyncs = 0;           // decryptions that hit the scan cap
};

/// Encrypt/decrypt `trials` random messages of `message_len` symbols with
/// fresh x0 per trial and count per-position correct decryptions. A symbol
/// recovered as out-of-range and everything after a scan-cap abort count as
/// wrong. The theory curve uses the measured hit probability.
ErrorRateReport error_rate_by_position(const KeyMaterial& key, CipherVariant variant,
                                       std::uint32_t message_len, std::uint64_t trials,
                                       const Seed128& mc_seed);

}  // namespace baptista
