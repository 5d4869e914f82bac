#include "njpc/exactdist.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace njpc {

MixtureComponentRates component_rates(const CensoringScheme& scheme,
                                      const ExpParams& params, int r,
                                      Parameter which) {
  const int k = scheme.k();
  if (r < 1 || r > k - 1) {
    std::ostringstream msg;
    msg << "mixture index r=" << r << " outside [1, " << k - 1 << "]";
    throw IndexOutOfRange(msg.str());
  }
  const double t1 = params.theta1;
  const double t2 = params.theta2;
  const double divisor = which == Parameter::theta1 ? r : k - r;

  MixtureComponentRates out{r, Eigen::VectorXd(k)};
  for (int s = 0; s < k; ++s) {
    const double a = scheme.pop1_at_risk(s);
    const double b = scheme.pop2_at_risk(s);
    const double own = which == Parameter::theta1 ? a : b;
    out.scales(s) = own * t1 * t2 / (divisor * (a * t2 + b * t1));
  }
  return out;
}

MleMixture::MleMixture(Parameter which, Eigen::VectorXd weights,
                       std::vector<MixtureComponentRates> components)
    : which_(which),
      weights_(std::move(weights)),
      components_(std::move(components)) {
  evaluators_.reserve(components_.size());
  for (const auto& c : components_) evaluators_.emplace_back(c.scales);
}

double MleMixture::pdf(double t) const {
  double total = 0.0;
  for (std::size_t i = 0; i < evaluators_.size(); ++i)
    total += weights_(static_cast<Eigen::Index>(i)) * evaluators_[i].pdf(t);
  return total;
}

double MleMixture::survival(double t) const {
  double total = 0.0;
  for (std::size_t i = 0; i < evaluators_.size(); ++i)
    total += weights_(static_cast<Eigen::Index>(i)) * evaluators_[i].survival(t);
  return std::clamp(total, 0.0, 1.0);
}

double MleMixture::mean() const {
  double total = 0.0;
  for (std::size_t i = 0; i < evaluators_.size(); ++i)
    total += weights_(static_cast<Eigen::Index>(i)) * evaluators_[i].mean();
  return total;
}

double MleMixture::second_moment() const {
  double total = 0.0;
  for (std::size_t i = 0; i < evaluators_.size(); ++i)
    total += weights_(static_cast<Eigen::Index>(i)) * evaluators_[i].second_moment();
  return total;
}

double MleMixture::upper_bound(double tail) const {
  double hi = std::max(mean(), 1e-300);
  while (survival(hi) >= tail) hi *= 2.0;
  return hi;
}

double MleMixture::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "quantile level " << p << " outside (0, 1)";
    throw IndexOutOfRange(msg.str());
  }
  const double target = 1.0 - p;
  double lo = 0.0;
  double hi = mean();
  while (survival(hi) > target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (survival(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

MleMixture mle_mixture(const CensoringScheme& scheme, const ExpParams& params,
                       Parameter which) {
  const FailureCountDist dist = failure_count_dist(scheme, params);
  Eigen::VectorXd weights = conditional_weights(dist);
  std::vector<MixtureComponentRates> components;
  components.reserve(static_cast<std::size_t>(scheme.k() - 1));
  for (int r = 1; r <= scheme.k() - 1; ++r)
    components.push_back(component_rates(scheme, params, r, which));
  return MleMixture(which, std::move(weights), std::move(components));
}

MleMoments mle_moments(const CensoringScheme& scheme, const ExpParams& params,
                       Parameter which) {
  const int k = scheme.k();
  const Eigen::VectorXd weights = conditional_weights(failure_count_dist(scheme, params));
  MleMoments out{0.0, 0.0};
  if (scheme.m() == scheme.n()) {
    // Equal sample sizes: every stage of component r has the same mean.
    const double base =
        params.theta1 * params.theta2 / (params.theta1 + params.theta2);
    for (int r = 1; r <= k - 1; ++r) {
      const double stage = base / (which == Parameter::theta1 ? r : k - r);
      out.mean += weights(r - 1) * k * stage;
      out.second_moment += weights(r - 1) * k * (k + 1.0) * stage * stage;
    }
    return out;
  }
  for (int r = 1; r <= k - 1; ++r) {
    const Eigen::VectorXd a = component_rates(scheme, params, r, which).scales;
    const double sum = a.sum();
    out.mean += weights(r - 1) * sum;
    // 2 sum a_s^2 + sum_{i != j} a_i a_j
    out.second_moment += weights(r - 1) * (a.squaredNorm() + sum * sum);
  }
  return out;
}

std::vector<std::pair<double, double>> pdf_curve(const MleMixture& mixture,
                                                 int points) {
  if (points < 2) throw IndexOutOfRange("pdf curve needs at least 2 points");
  const double hi = mixture.quantile(1.0 - 1e-6);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = hi * i / (points - 1);
    curve.emplace_back(t, mixture.pdf(t));
  }
  return curve;
}

}  // namespace njpc
