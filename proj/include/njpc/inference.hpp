#pragma once

#include <optional>

#include "njpc/core.hpp"
#include "njpc/simulate.hpp"

namespace njpc {

// Conditional MLE (A1/m_k, A2/n_k), defined when 1 <= m_k <= k - 1.
struct MleEstimate {
  double theta1_hat;
  double theta2_hat;
  SufficientStats stats;

  double operator[](Parameter which) const {
    return which == Parameter::theta1 ? theta1_hat : theta2_hat;
  }
  ExpParams params() const { return ExpParams(theta1_hat, theta2_hat); }
};

MleEstimate fit(const CensoringScheme& scheme, const NjpcSample& sample);
MleEstimate fit(const SufficientStats& stats);

enum class CiMethod { exact, bootstrap };

const char* to_string(CiMethod method);

struct ConfidenceInterval {
  double lower;
  std::optional<double> upper;  // empty when the upper equation has no root
  double level;
  CiMethod method;

  bool open_ended() const { return !upper.has_value(); }
  double length() const;
  bool covers(double value) const;
};

// P(theta_hat > t | 1 <= m_k <= k - 1) under `params`.
double conditional_tail(const CensoringScheme& scheme, const ExpParams& params,
                        Parameter which, double t);

struct ExactCiOptions {
  double residual_tolerance = 1e-8;
  // Search for the upper endpoint stops at cap_factor * theta_hat.
  double cap_factor = 1e6;
};

/**
 * Exact interval from the conditional law of the MLE.
 *
 * Solves P_L(theta_hat > obs) = alpha/2 and P_U(theta_hat > obs) = 1 - alpha/2
 * with the other mean fixed at its MLE. The tail probability increases
 * strictly in the parameter, so each equation has at most one root; it is
 * found by bisection on log(theta) after doubling out a bracket from the MLE.
 * When the upper equation stays below 1 - alpha/2 up to the cap, the interval
 * is returned open-ended.
 */
ConfidenceInterval exact_ci(const CensoringScheme& scheme,
                            const MleEstimate& estimate, Parameter which,
                            double level, const ExactCiOptions& options = {});

struct BootstrapIntervals {
  ConfidenceInterval theta1;
  ConfidenceInterval theta2;
  long rejected = 0;  // resamples redrawn because m_k was 0 or k
};

// 1-based order statistics used for a percentile interval of B resamples:
// floor(alpha/2 B) and floor((1 - alpha/2) B), clamped to [1, B].
std::pair<int, int> percentile_indices(double level, int resamples);

// Parametric percentile bootstrap; resamples drawn at the MLE, degenerate
// ones redrawn. Deterministic in `seed`.
BootstrapIntervals bootstrap_ci(const CensoringScheme& scheme,
                                const MleEstimate& estimate, double level,
                                int resamples, RngSeed seed);

}  // namespace njpc
