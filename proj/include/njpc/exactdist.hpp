#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "njpc/core.hpp"
#include "njpc/discrete.hpp"
#include "njpc/hypoexp.hpp"

namespace njpc {

// Per-stage exponential means of one mixture component: the law of the MLE
// given m_k = r.
struct MixtureComponentRates {
  int r;
  Eigen::VectorXd scales;
};

// Stage means of the given MLE conditional on m_k = r, 1 <= r <= k - 1.
//   theta1: (m - S) t1 t2 / (r [(m - S) t2 + (n - S) t1])
//   theta2: (n - S) t1 t2 / ((k - r) [(m - S) t2 + (n - S) t1])
MixtureComponentRates component_rates(const CensoringScheme& scheme,
                                      const ExpParams& params, int r,
                                      Parameter which);

/**
 * Exact law of one MLE conditional on 1 <= m_k <= k - 1: a (k-1)-component
 * mixture of hypoexponential distributions weighted by P(m_k = r | ...).
 *
 * Immutable after construction. Components are prepared once so repeated
 * survival evaluations (root finding) only pay for the exponentials.
 */
class MleMixture {
 public:
  MleMixture(Parameter which, Eigen::VectorXd weights,
             std::vector<MixtureComponentRates> components);

  Parameter which() const noexcept { return which_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const std::vector<MixtureComponentRates>& components() const noexcept {
    return components_;
  }
  const Hypoexponential<double>& component(std::size_t i) const {
    return evaluators_[i];
  }

  double pdf(double t) const;
  double survival(double t) const;
  double cdf(double t) const { return 1.0 - survival(t); }
  double mean() const;
  double second_moment() const;

  // Inverse CDF by bisection; p in (0, 1).
  double quantile(double p) const;

  // A point U with survival(U) < tail.
  double upper_bound(double tail = 1e-12) const;

 private:
  Parameter which_;
  Eigen::VectorXd weights_;
  std::vector<MixtureComponentRates> components_;
  std::vector<Hypoexponential<double>> evaluators_;
};

MleMixture mle_mixture(const CensoringScheme& scheme, const ExpParams& params,
                       Parameter which);

struct MleMoments {
  double mean;
  double second_moment;
  double variance() const { return second_moment - mean * mean; }
};

// Closed-form first two moments of the conditional MLE.
MleMoments mle_moments(const CensoringScheme& scheme, const ExpParams& params,
                       Parameter which);

// (t, density) pairs on a uniform grid from 0 to the 1 - 1e-6 quantile,
// so the curve covers the central 1e-4 .. 1 - 1e-4 quantile range with margin.
std::vector<std::pair<double, double>> pdf_curve(const MleMixture& mixture,
                                                 int points);

}  // namespace njpc
