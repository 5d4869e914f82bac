#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "njpc/errors.hpp"

namespace njpc {

enum class Parameter { theta1, theta2 };

const char* to_string(Parameter which);

// Throws InfeasibleScheme naming the first violated inequality.
void validate_scheme(int m, int n, int k, std::span<const int> withdrawals);

/**
 * Two-sample joint progressive type-II censoring design.
 *
 * m and n units of the two populations go on test together. At the i-th
 * failure (i < k) the failing unit's population loses R_i further units and
 * the other population loses R_i + 1, so both shed R_i + 1 units per stage.
 * The k-th failure ends the test.
 *
 * Stage indices below are zero-based: stage s in [0, k).
 */
class CensoringScheme {
 public:
  CensoringScheme(int m, int n, int k, std::vector<int> withdrawals);

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  const std::vector<int>& withdrawals() const noexcept { return withdrawals_; }

  // Sum of (R_j + 1) over the stages before `stage`.
  int removed_before(int stage) const { return removed_before_[stage]; }
  int pop1_at_risk(int stage) const { return m_ - removed_before_[stage]; }
  int pop2_at_risk(int stage) const { return n_ - removed_before_[stage]; }

  // Coefficient of w_i in the total time on test of either population,
  // excluding the population-specific tail term at the last failure.
  int stage_weight(int stage) const;

  bool operator==(const CensoringScheme&) const = default;

 private:
  int m_;
  int n_;
  int k_;
  std::vector<int> withdrawals_;
  std::vector<int> removed_before_;
};

// Exponential means of the two populations.
struct ExpParams {
  double theta1;
  double theta2;

  ExpParams(double t1, double t2);

  double operator[](Parameter which) const {
    return which == Parameter::theta1 ? theta1 : theta2;
  }
  ExpParams with(Parameter which, double value) const;
};

// Observed failure times and population indicators (z = 1 for Pop-1).
struct NjpcSample {
  std::vector<double> w;
  std::vector<int> z;
};

struct SufficientStats {
  int failures_pop1;  // m_k
  int failures_pop2;  // n_k
  double ttt_pop1;    // A1
  double ttt_pop2;    // A2
};

// Throws DimensionMismatch unless w and z both have length k, and
// InvalidSample unless z is binary and w is non-negative and non-decreasing.
void check_sample(const CensoringScheme& scheme, const NjpcSample& sample);

SufficientStats sufficient_stats(const CensoringScheme& scheme,
                                 const NjpcSample& sample);

// log C - m_k log(theta1) - n_k log(theta2) - A1/theta1 - A2/theta2, where C
// is the product of the at-risk counts of the failing population.
double log_likelihood(const CensoringScheme& scheme, const NjpcSample& sample,
                      const ExpParams& params);

// log C alone, summed in log space.
double log_normalizing_constant(const CensoringScheme& scheme,
                                std::span<const int> z);

}  // namespace njpc
