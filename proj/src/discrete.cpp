#include "njpc/discrete.hpp"

#include <cmath>
#include <sstream>

namespace njpc {

double FailureCountDist::conditioning_mass() const {
  const int k = this->k();
  return probs.segment(1, k - 1).sum();
}

Eigen::VectorXd FailureCountDist::cdf() const {
  Eigen::VectorXd out(probs.size());
  double acc = 0.0;
  for (Eigen::Index r = 0; r < probs.size(); ++r) out(r) = (acc += probs(r));
  return out;
}

Eigen::VectorXd bernoulli_probs(const CensoringScheme& scheme,
                                const ExpParams& params) {
  Eigen::VectorXd p(scheme.k());
  for (int s = 0; s < scheme.k(); ++s) {
    const double pop1 = scheme.pop1_at_risk(s) * params.theta2;
    const double pop2 = scheme.pop2_at_risk(s) * params.theta1;
    p(s) = pop1 / (pop1 + pop2);
  }
  return p;
}

FailureCountDist failure_count_dist(const CensoringScheme& scheme,
                                    const ExpParams& params) {
  FailureCountDist dist;
  dist.p_seq = bernoulli_probs(scheme, params);
  dist.probs = poisson_binomial_pmf(dist.p_seq);
  return dist;
}

FailureCountDist oracle_failure_count_dist(const CensoringScheme& scheme,
                                           const ExpParams& params) {
  const int k = scheme.k();
  if (k > 20) {
    std::ostringstream msg;
    msg << "enumeration oracle supports k <= 20, got k=" << k;
    throw OracleTooLarge(msg.str());
  }
  const double t1 = params.theta1;
  const double t2 = params.theta2;

  FailureCountDist dist;
  dist.p_seq.resize(k);
  for (int s = 0; s < k; ++s) {
    const double a = scheme.pop1_at_risk(s);
    const double b = scheme.pop2_at_risk(s);
    dist.p_seq(s) = a * t2 / (a * t2 + b * t1);
  }

  dist.probs = Eigen::VectorXd::Zero(k + 1);
  const unsigned long patterns = 1UL << k;
  for (unsigned long bits = 0; bits < patterns; ++bits) {
    int r = 0;
    double product = 1.0;
    for (int s = 0; s < k; ++s) {
      const int zs = static_cast<int>((bits >> s) & 1UL);
      const double a = scheme.pop1_at_risk(s);
      const double b = scheme.pop2_at_risk(s);
      product *= (a * zs + b * (1 - zs)) / (a * t2 + b * t1);
      r += zs;
    }
    dist.probs(r) += product * std::pow(t1, k - r) * std::pow(t2, r);
  }
  return dist;
}

double conditional_weight(const FailureCountDist& dist, int r) {
  const int k = dist.k();
  if (r < 1 || r > k - 1) {
    std::ostringstream msg;
    msg << "conditional weight index r=" << r << " outside [1, " << k - 1
        << "]";
    throw IndexOutOfRange(msg.str());
  }
  return conditional_weights(dist)(r - 1);
}

Eigen::VectorXd conditional_weights(const FailureCountDist& dist) {
  const int k = dist.k();
  const double mass = dist.conditioning_mass();
  if (!(mass >= kDegenerateConditioningMass)) {
    std::ostringstream msg;
    msg << "P(1 <= m_k <= k-1) = " << mass << " is below "
        << kDegenerateConditioningMass;
    throw DegenerateConditioning(msg.str());
  }
  return dist.probs.segment(1, k - 1) / mass;
}

}  // namespace njpc
