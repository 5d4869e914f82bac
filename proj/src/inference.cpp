#include "njpc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "njpc/exactdist.hpp"

namespace njpc {

MleEstimate fit(const SufficientStats& stats) {
  const int k = stats.failures_pop1 + stats.failures_pop2;
  if (stats.failures_pop1 < 1 || stats.failures_pop2 < 1)
    throw MleDoesNotExist(stats.failures_pop1, k);
  return MleEstimate{stats.ttt_pop1 / stats.failures_pop1,
                     stats.ttt_pop2 / stats.failures_pop2, stats};
}

MleEstimate fit(const CensoringScheme& scheme, const NjpcSample& sample) {
  return fit(sufficient_stats(scheme, sample));
}

const char* to_string(CiMethod method) {
  return method == CiMethod::exact ? "exact" : "bootstrap";
}

double ConfidenceInterval::length() const {
  return upper ? *upper - lower : std::numeric_limits<double>::infinity();
}

bool ConfidenceInterval::covers(double value) const {
  return value >= lower && (!upper || value <= *upper);
}

double conditional_tail(const CensoringScheme& scheme, const ExpParams& params,
                        Parameter which, double t) {
  return mle_mixture(scheme, params, which).survival(t);
}

namespace {

void check_level(double level, double lo) {
  if (!(level > lo && level < 1.0)) {
    std::ostringstream msg;
    msg << "confidence level " << level << " outside (" << lo << ", 1)";
    throw InvalidArgument(msg.str());
  }
}

// Root of tail(theta) = target for an increasing tail, or nullopt when the
// tail stays below target up to `cap`.
template <typename Tail>
std::optional<double> solve_increasing(const Tail& tail, double start,
                                       double target, double cap,
                                       double tolerance) {
  double lo = start;
  double hi = start;
  double at_start = tail(start);
  if (std::abs(at_start - target) < tolerance) return start;
  if (at_start > target) {
    do {
      hi = lo;
      lo *= 0.5;
      if (!(lo > std::numeric_limits<double>::min()))
        throw DegenerateConditioning("no lower bracket for the exact interval");
    } while (tail(lo) > target);
  } else {
    do {
      lo = hi;
      hi *= 2.0;
      if (hi >= cap) {
        hi = cap;
        if (tail(cap) < target) return std::nullopt;
        break;
      }
    } while (tail(hi) < target);
  }

  double mid = std::sqrt(lo * hi);
  for (int iter = 0; iter < 300; ++iter) {
    mid = std::sqrt(lo * hi);
    const double value = tail(mid);
    if (std::abs(value - target) < tolerance) break;
    if (value < target)
      lo = mid;
    else
      hi = mid;
    if (hi / lo - 1.0 < 4 * std::numeric_limits<double>::epsilon()) break;
  }
  return mid;
}

}  // namespace

ConfidenceInterval exact_ci(const CensoringScheme& scheme,
                            const MleEstimate& estimate, Parameter which,
                            double level, const ExactCiOptions& options) {
  check_level(level, 0.5);
  const double alpha = 1.0 - level;
  const double observed = estimate[which];
  const ExpParams plug_in = estimate.params();
  auto tail = [&](double theta) {
    return mle_mixture(scheme, plug_in.with(which, theta), which).survival(observed);
  };
  const double cap = options.cap_factor * observed;
  const auto lower = solve_increasing(tail, observed, alpha / 2.0, cap,
                                      options.residual_tolerance);
  const auto upper = solve_increasing(tail, observed, 1.0 - alpha / 2.0, cap,
                                      options.residual_tolerance);
  // The lower equation always has a root: the tail vanishes as theta -> 0.
  // It can only miss the cap if the upper one does too.
  return ConfidenceInterval{lower.value_or(cap), upper, level, CiMethod::exact};
}

std::pair<int, int> percentile_indices(double level, int resamples) {
  const double alpha = 1.0 - level;
  // Guard against 0.1 * 1000 / 2 landing on 49.999...
  constexpr double nudge = 1e-9;
  auto index = [&](double x) {
    const int i = static_cast<int>(std::floor(x + nudge));
    return std::clamp(i, 1, resamples);
  };
  return {index(alpha / 2.0 * resamples), index((1.0 - alpha / 2.0) * resamples)};
}

BootstrapIntervals bootstrap_ci(const CensoringScheme& scheme,
                                const MleEstimate& estimate, double level,
                                int resamples, RngSeed seed) {
  check_level(level, 0.0);
  if (resamples < 100) {
    std::ostringstream msg;
    msg << "bootstrap needs at least 100 resamples, got " << resamples;
    throw InvalidArgument(msg.str());
  }
  const int k = scheme.k();
  const NjpcSampler sampler(scheme, estimate.params());
  Rng rng(seed);

  BootstrapIntervals out{{0, {}, level, CiMethod::bootstrap},
                         {0, {}, level, CiMethod::bootstrap},
                         0};
  const long rejection_limit = 1000L * resamples + 100000L;
  std::vector<double> t1(static_cast<std::size_t>(resamples));
  std::vector<double> t2(static_cast<std::size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    SufficientStats stats = sampler.draw_stats(rng);
    while (stats.failures_pop1 == 0 || stats.failures_pop1 == k) {
      if (++out.rejected > rejection_limit)
        throw DegenerateConditioning("bootstrap resamples are almost always degenerate");
      stats = sampler.draw_stats(rng);
    }
    t1[b] = stats.ttt_pop1 / stats.failures_pop1;
    t2[b] = stats.ttt_pop2 / stats.failures_pop2;
  }
  std::sort(t1.begin(), t1.end());
  std::sort(t2.begin(), t2.end());
  const auto [lo, hi] = percentile_indices(level, resamples);
  out.theta1.lower = t1[lo - 1];
  out.theta1.upper = t1[hi - 1];
  out.theta2.lower = t2[lo - 1];
  out.theta2.upper = t2[hi - 1];
  return out;
}

}  // namespace njpc
