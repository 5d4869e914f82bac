#include "njpc/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace njpc {

const char* to_string(Parameter which) {
  return which == Parameter::theta1 ? "theta1" : "theta2";
}

void validate_scheme(int m, int n, int k, std::span<const int> withdrawals) {
  std::ostringstream msg;
  if (m < 1 || n < 1 || k < 1) {
    msg << "m, n and k must be positive (m=" << m << ", n=" << n << ", k=" << k
        << ")";
    throw InfeasibleScheme(msg.str());
  }
  const int size_floor = std::min(m, n);
  if (k >= size_floor) {
    msg << "k < min(m, n) violated: k=" << k << ", min(m, n)=" << size_floor;
    throw InfeasibleScheme(msg.str());
  }
  if (static_cast<int>(withdrawals.size()) != k - 1) {
    msg << "R must have k-1=" << k - 1 << " entries, got "
        << withdrawals.size();
    throw InfeasibleScheme(msg.str());
  }
  long removed = 0;
  for (std::size_t i = 0; i < withdrawals.size(); ++i) {
    if (withdrawals[i] < 0) {
      msg << "R_" << i + 1 << " = " << withdrawals[i] << " is negative";
      throw InfeasibleScheme(msg.str());
    }
    removed += withdrawals[i] + 1;
  }
  if (removed >= size_floor) {
    msg << "sum(R_i + 1) < min(m, n) violated: sum(R_i + 1)=" << removed
        << " >= min(m, n)=" << size_floor;
    throw InfeasibleScheme(msg.str());
  }
}

CensoringScheme::CensoringScheme(int m, int n, int k,
                                 std::vector<int> withdrawals)
    : m_(m), n_(n), k_(k), withdrawals_(std::move(withdrawals)) {
  validate_scheme(m_, n_, k_, withdrawals_);
  removed_before_.resize(k_);
  int removed = 0;
  for (int s = 0; s < k_; ++s) {
    removed_before_[s] = removed;
    if (s < k_ - 1) removed += withdrawals_[s] + 1;
  }
}

int CensoringScheme::stage_weight(int stage) const {
  return stage < k_ - 1 ? withdrawals_[stage] + 1 : 0;
}

ExpParams::ExpParams(double t1, double t2) : theta1(t1), theta2(t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0) || !std::isfinite(t1) ||
      !std::isfinite(t2)) {
    std::ostringstream msg;
    msg << "exponential means must be positive and finite (theta1=" << t1
        << ", theta2=" << t2 << ")";
    throw NonPositiveParams(msg.str());
  }
}

ExpParams ExpParams::with(Parameter which, double value) const {
  return which == Parameter::theta1 ? ExpParams(value, theta2)
                                    : ExpParams(theta1, value);
}

void check_sample(const CensoringScheme& scheme, const NjpcSample& sample) {
  const auto k = static_cast<std::size_t>(scheme.k());
  if (sample.w.size() != k || sample.z.size() != k) {
    std::ostringstream msg;
    msg << "sample has " << sample.w.size() << " times and " << sample.z.size()
        << " indicators, scheme expects k=" << k;
    throw DimensionMismatch(msg.str());
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::ostringstream msg;
    if (sample.z[i] != 0 && sample.z[i] != 1) {
      msg << "indicator z_" << i + 1 << " = " << sample.z[i]
          << " is not 0 or 1";
      throw InvalidSample(msg.str());
    }
    if (!(sample.w[i] >= 0.0) || !std::isfinite(sample.w[i])) {
      msg << "failure time w_" << i + 1 << " = " << sample.w[i]
          << " is not a non-negative number";
      throw InvalidSample(msg.str());
    }
    if (i > 0 && sample.w[i] < sample.w[i - 1]) {
      msg << "failure times decrease at w_" << i + 1;
      throw InvalidSample(msg.str());
    }
  }
}

SufficientStats sufficient_stats(const CensoringScheme& scheme,
                                 const NjpcSample& sample) {
  check_sample(scheme, sample);
  const int k = scheme.k();
  double shared = 0.0;
  for (int i = 0; i < k - 1; ++i) shared += scheme.stage_weight(i) * sample.w[i];
  const double last = sample.w[k - 1];

  SufficientStats stats{};
  for (int zi : sample.z) stats.failures_pop1 += zi;
  stats.failures_pop2 = k - stats.failures_pop1;
  stats.ttt_pop1 = shared + scheme.pop1_at_risk(k - 1) * last;
  stats.ttt_pop2 = shared + scheme.pop2_at_risk(k - 1) * last;
  return stats;
}

double log_normalizing_constant(const CensoringScheme& scheme,
                                std::span<const int> z) {
  double log_c = 0.0;
  for (int s = 0; s < scheme.k(); ++s) {
    const int at_risk = z[s] == 1 ? scheme.pop1_at_risk(s) : scheme.pop2_at_risk(s);
    log_c += std::log(static_cast<double>(at_risk));
  }
  return log_c;
}

double log_likelihood(const CensoringScheme& scheme, const NjpcSample& sample,
                      const ExpParams& params) {
  const SufficientStats stats = sufficient_stats(scheme, sample);
  return log_normalizing_constant(scheme, sample.z) -
         stats.failures_pop1 * std::log(params.theta1) -
         stats.failures_pop2 * std::log(params.theta2) -
         stats.ttt_pop1 / params.theta1 - stats.ttt_pop2 / params.theta2;
}

}  // namespace njpc
