#pragma once

#include <Eigen/Core>

#include "njpc/core.hpp"

namespace njpc {

// Law of the Pop-1 failure count m_k.
struct FailureCountDist {
  Eigen::VectorXd probs;  // P(m_k = r), r = 0..k
  Eigen::VectorXd p_seq;  // P(Z_i = 1), i = 1..k

  int k() const { return static_cast<int>(p_seq.size()); }
  // P(1 <= m_k <= k - 1)
  double conditioning_mass() const;
  Eigen::VectorXd cdf() const;
};

/**
 * Probability mass function of a sum of independent Bernoulli(p_i) variables
 * by the convolution recursion, O(k^2). Entry r of the result is P(sum = r).
 */
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> poisson_binomial_pmf(
    const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = p.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pmf =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(k + 1);
  pmf(0) = Scalar(1);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Scalar success = p(i);
    const Scalar failure = Scalar(1) - success;
    for (Eigen::Index r = i + 1; r > 0; --r)
      pmf(r) = pmf(r) * failure + pmf(r - 1) * success;
    pmf(0) *= failure;
  }
  return pmf;
}

// Per-failure probabilities that the failure comes from Pop-1. The Z_i are
// independent because both populations shed the same count at every stage.
Eigen::VectorXd bernoulli_probs(const CensoringScheme& scheme,
                                const ExpParams& params);

FailureCountDist failure_count_dist(const CensoringScheme& scheme,
                                    const ExpParams& params);

// Literal sum over every indicator vector with r ones. Test oracle; k <= 20.
FailureCountDist oracle_failure_count_dist(const CensoringScheme& scheme,
                                           const ExpParams& params);

constexpr double kDegenerateConditioningMass = 1e-300;

// P(m_k = r | 1 <= m_k <= k - 1) for 1 <= r <= k - 1.
double conditional_weight(const FailureCountDist& dist, int r);

// All conditional weights; entry r - 1 holds the weight of m_k = r.
Eigen::VectorXd conditional_weights(const FailureCountDist& dist);

}  // namespace njpc
