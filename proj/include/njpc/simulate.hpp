#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "njpc/core.hpp"

namespace njpc {

struct RngSeed {
  std::uint64_t master_seed;
  std::uint64_t stream_id;
};

/**
 * Seedable, splittable 64-bit generator. Stream (seed, id) is a Mersenne
 * Twister seeded from both words, so replication i of a study can own stream
 * i regardless of which thread runs it. Variates are built from raw 64-bit
 * draws, not std:: distributions, so sequences do not depend on the standard
 * library vendor.
 */
class Rng {
 public:
  explicit Rng(RngSeed seed);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Inverse transform: -mean * log(1 - U).
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform integer in [0, bound), bound > 0.
  std::size_t below(std::size_t bound);

 private:
  std::mt19937_64 engine_;
};

// Total hazard E_s = (m - S)/theta1 + (n - S)/theta2 of the units at risk
// during stage s. Strictly decreasing in s.
struct StageRates {
  Eigen::VectorXd rates;
};

StageRates stage_rates(const CensoringScheme& scheme, const ExpParams& params);

// E(W_k) = sum_s 1/E_s.
double expected_duration(const CensoringScheme& scheme, const ExpParams& params);

/**
 * Draws (W, Z) directly: W_i is the cumulative sum of independent spacings
 * with means 1/E_s, and Z_i ~ Bernoulli(p_i) independently of W.
 * Precomputes the per-stage constants so bootstrap loops stay cheap.
 */
class NjpcSampler {
 public:
  NjpcSampler(const CensoringScheme& scheme, const ExpParams& params);

  NjpcSample operator()(Rng& rng) const;
  // Same draw sequence as operator(), reduced to the sufficient statistic.
  SufficientStats draw_stats(Rng& rng) const;

 private:
  int k_;
  Eigen::VectorXd spacing_means_;
  Eigen::VectorXd pop1_probs_;
  Eigen::VectorXd ttt_weight_pop1_;  // coefficient of spacing s in A1
  Eigen::VectorXd ttt_weight_pop2_;
};

NjpcSample generate(const CensoringScheme& scheme, const ExpParams& params,
                    RngSeed seed);

/**
 * Runs the censoring process on complete lifetimes x (Pop-1, size m) and
 * y (Pop-2, size n). At each failure the failing unit's population loses R_i
 * further random survivors and the other population loses R_i + 1; the
 * k-th failure ends the test. Equal lifetimes resolve to the lower index,
 * Pop-1 units ranking before Pop-2 units.
 */
NjpcSample apply_scheme(std::span<const double> x, std::span<const double> y,
                        const CensoringScheme& scheme, RngSeed seed);

}  // namespace njpc
