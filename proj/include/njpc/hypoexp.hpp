#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Core>
#include <unsupported/Eigen/MatrixFunctions>

#include "njpc/errors.hpp"

namespace njpc {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/**
 * Evaluation strategy for a sum of independent exponentials.
 *
 * erlang: every mean equal (relative spread below kErlangSpread); closed form.
 * partial_fractions: classical sum of exponentials with coefficients
 *   prod_{j != s} l_j / (l_j - l_s). Exact for distinct rates but the
 *   coefficients grow like the inverse product of rate gaps, so it is only
 *   chosen when every relative gap exceeds kMinRelativeGap and the summed
 *   coefficient magnitude stays below kMaxAmplification.
 * phase_type: first row of exp(T t) for the bidiagonal sub-generator T with
 *   -l_s on the diagonal and l_s above it. Covers equal, clustered and
 *   partially coincident rates without cancellation.
 */
enum class HypoexpRoute { erlang, partial_fractions, phase_type };

inline constexpr double kErlangSpread = 1e-12;
inline constexpr double kMinRelativeGap = 1e-6;
inline constexpr double kMaxAmplification = 1e4;

namespace detail {

template <typename Scalar>
void check_scales(const VectorX<Scalar>& scales) {
  if (scales.size() == 0) throw InvalidScale("hypoexponential needs at least one scale");
  for (Eigen::Index i = 0; i < scales.size(); ++i) {
    if (!(scales(i) > Scalar(0)) || !std::isfinite(static_cast<double>(scales(i)))) {
      std::ostringstream msg;
      msg << "scale " << i << " = " << static_cast<double>(scales(i))
          << " is not positive";
      throw InvalidScale(msg.str());
    }
  }
}

}  // namespace detail

// Gamma density with integer shape and the given mean per stage.
template <typename Scalar>
Scalar erlang_pdf(int shape, Scalar scale, Scalar t) {
  using std::exp;
  using std::lgamma;
  using std::log;
  if (!(t > Scalar(0))) return Scalar(0);
  const Scalar x = t / scale;
  return exp(Scalar(shape - 1) * log(x) - x - lgamma(Scalar(shape))) / scale;
}

// Gamma upper tail with integer shape: exp(-x) sum_{j < shape} x^j / j!.
template <typename Scalar>
Scalar erlang_survival(int shape, Scalar scale, Scalar t) {
  using std::exp;
  using std::lgamma;
  using std::log;
  if (!(t > Scalar(0))) return Scalar(1);
  const Scalar x = t / scale;
  const Scalar log_x = log(x);
  Scalar total = exp(-x);
  for (int j = 1; j < shape; ++j)
    total += exp(Scalar(j) * log_x - x - lgamma(Scalar(j + 1)));
  return std::min(total, Scalar(1));
}

/**
 * Distribution of X = sum_s U_s with U_s ~ Exp(mean scales(s)), independent.
 */
template <typename Scalar>
class Hypoexponential {
 public:
  explicit Hypoexponential(VectorX<Scalar> scales) : scales_(std::move(scales)) {
    detail::check_scales(scales_);
    prepare();
    route_ = choose_route();
    build(route_);
  }

  // Force a route. partial_fractions requires pairwise distinct rates and
  // erlang requires all scales equal within kErlangSpread.
  Hypoexponential(VectorX<Scalar> scales, HypoexpRoute route)
      : scales_(std::move(scales)), route_(route) {
    detail::check_scales(scales_);
    prepare();
    if (route == HypoexpRoute::erlang && relative_spread() > Scalar(kErlangSpread))
      throw InvalidScale("erlang route needs equal scales");
    if (route == HypoexpRoute::partial_fractions && !(min_relative_gap() > Scalar(0)))
      throw InvalidScale("partial fractions need distinct rates");
    build(route);
  }

  HypoexpRoute route() const noexcept { return route_; }
  const VectorX<Scalar>& scales() const noexcept { return scales_; }
  int stages() const noexcept { return static_cast<int>(scales_.size()); }

  Scalar mean() const { return scales_.sum(); }
  Scalar second_moment() const {
    const Scalar mu = mean();
    return scales_.squaredNorm() + mu * mu;
  }

  Scalar pdf(Scalar t) const {
    if (!(t > Scalar(0))) return Scalar(0);
    switch (route_) {
      case HypoexpRoute::erlang:
        return erlang_pdf<Scalar>(stages(), erlang_scale_, t);
      case HypoexpRoute::partial_fractions: {
        using std::exp;
        Scalar total(0);
        for (Eigen::Index s = 0; s < rates_.size(); ++s)
          total += coefficients_(s) * rates_(s) * exp(-rates_(s) * t);
        return std::max(total, Scalar(0));
      }
      case HypoexpRoute::phase_type: {
        const VectorX<Scalar> row = first_row(t);
        return std::max(row(row.size() - 1) * rates_(rates_.size() - 1), Scalar(0));
      }
    }
    return Scalar(0);
  }

  Scalar survival(Scalar t) const {
    if (!(t > Scalar(0))) return Scalar(1);
    Scalar value(0);
    switch (route_) {
      case HypoexpRoute::erlang:
        value = erlang_survival<Scalar>(stages(), erlang_scale_, t);
        break;
      case HypoexpRoute::partial_fractions: {
        using std::exp;
        for (Eigen::Index s = 0; s < rates_.size(); ++s)
          value += coefficients_(s) * exp(-rates_(s) * t);
        break;
      }
      case HypoexpRoute::phase_type:
        value = first_row(t).sum();
        break;
    }
    return std::clamp(value, Scalar(0), Scalar(1));
  }

  Scalar cdf(Scalar t) const { return Scalar(1) - survival(t); }

  // Smallest pairwise |l_i - l_j| / max(l_i, l_j); +inf for a single stage.
  Scalar min_relative_gap() const {
    Scalar gap = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < rates_.size(); ++i)
      for (Eigen::Index j = i + 1; j < rates_.size(); ++j) {
        using std::abs;
        const Scalar d = abs(rates_(i) - rates_(j)) / std::max(rates_(i), rates_(j));
        gap = std::min(gap, d);
      }
    return gap;
  }

  // Sum of |partial-fraction coefficients|; the factor by which rounding
  // errors are amplified on that route.
  Scalar amplification() const {
    if (!(min_relative_gap() > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
    return partial_fraction_coefficients().cwiseAbs().sum();
  }

 private:
  void prepare() { rates_ = scales_.cwiseInverse(); }

  Scalar relative_spread() const {
    return (scales_.maxCoeff() - scales_.minCoeff()) / scales_.maxCoeff();
  }

  HypoexpRoute choose_route() const {
    if (relative_spread() <= Scalar(kErlangSpread)) return HypoexpRoute::erlang;
    if (min_relative_gap() > Scalar(kMinRelativeGap) &&
        amplification() < Scalar(kMaxAmplification))
      return HypoexpRoute::partial_fractions;
    return HypoexpRoute::phase_type;
  }

  VectorX<Scalar> partial_fraction_coefficients() const {
    const Eigen::Index k = rates_.size();
    VectorX<Scalar> c(k);
    for (Eigen::Index s = 0; s < k; ++s) {
      Scalar product(1);
      for (Eigen::Index j = 0; j < k; ++j)
        if (j != s) product *= rates_(j) / (rates_(j) - rates_(s));
      c(s) = product;
    }
    return c;
  }

  void build(HypoexpRoute route) {
    const Eigen::Index k = rates_.size();
    switch (route) {
      case HypoexpRoute::erlang:
        erlang_scale_ = scales_.mean();
        break;
      case HypoexpRoute::partial_fractions:
        coefficients_ = partial_fraction_coefficients();
        break;
      case HypoexpRoute::phase_type:
        generator_ = MatrixX<Scalar>::Zero(k, k);
        for (Eigen::Index s = 0; s < k; ++s) {
          generator_(s, s) = -rates_(s);
          if (s + 1 < k) generator_(s, s + 1) = rates_(s);
        }
        break;
    }
  }

  // Occupation probabilities of the transient phases at time t, starting in
  // phase 0.
  VectorX<Scalar> first_row(Scalar t) const {
    const MatrixX<Scalar> scaled = generator_ * t;
    const MatrixX<Scalar> transition = scaled.exp();
    return transition.row(0).transpose();
  }

  VectorX<Scalar> scales_;
  VectorX<Scalar> rates_;
  HypoexpRoute route_ = HypoexpRoute::phase_type;
  Scalar erlang_scale_ = Scalar(0);
  VectorX<Scalar> coefficients_;
  MatrixX<Scalar> generator_;
};

template <typename Scalar>
Scalar hypoexp_pdf(const VectorX<Scalar>& scales, Scalar t) {
  return Hypoexponential<Scalar>(scales).pdf(t);
}

template <typename Scalar>
Scalar hypoexp_survival(const VectorX<Scalar>& scales, Scalar t) {
  return Hypoexponential<Scalar>(scales).survival(t);
}

}  // namespace njpc
