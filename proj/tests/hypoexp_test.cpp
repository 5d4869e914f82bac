#include <cmath>
#include <random>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "njpc/hypoexp.hpp"
#include "test_support.hpp"

namespace njpc {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Independent oracle: textbook partial fractions carried out in long double,
// for scale sets whose amplification is harmless at that precision.
struct LongDoubleOracle {
  std::vector<long double> rates;
  explicit LongDoubleOracle(const Eigen::VectorXd& scales) {
    for (Eigen::Index i = 0; i < scales.size(); ++i) rates.push_back(1.0L / scales(i));
  }
  long double coefficient(std::size_t s) const {
    long double c = 1.0L;
    for (std::size_t j = 0; j < rates.size(); ++j)
      if (j != s) c *= rates[j] / (rates[j] - rates[s]);
    return c;
  }
  double pdf(double t) const {
    long double total = 0.0L;
    for (std::size_t s = 0; s < rates.size(); ++s)
      total += coefficient(s) * rates[s] * std::exp(-rates[s] * t);
    return static_cast<double>(total);
  }
  double survival(double t) const {
    long double total = 0.0L;
    for (std::size_t s = 0; s < rates.size(); ++s)
      total += coefficient(s) * std::exp(-rates[s] * t);
    return static_cast<double>(total);
  }
};

TEST(Hypoexponential, SingleStageIsExponential) {
  const Hypoexponential<double> h(vec({2.0}));
  EXPECT_EQ(h.route(), HypoexpRoute::erlang);
  EXPECT_NEAR(h.pdf(1.0), 0.5 * std::exp(-0.5), 1e-15);
  EXPECT_NEAR(h.survival(3.0), std::exp(-1.5), 1e-15);
}

TEST(Hypoexponential, TwoStagesClosedForm) {
  // scales 1 and 1/2: rates 1 and 2, density 2(e^-t - e^-2t).
  const Hypoexponential<double> h(vec({1.0, 0.5}));
  EXPECT_EQ(h.route(), HypoexpRoute::partial_fractions);
  for (double t : {0.1, 0.7, 2.0, 5.0}) {
    EXPECT_NEAR(h.pdf(t), 2.0 * (std::exp(-t) - std::exp(-2 * t)), 1e-14);
    EXPECT_NEAR(h.survival(t), 2.0 * std::exp(-t) - std::exp(-2 * t), 1e-14);
  }
  EXPECT_DOUBLE_EQ(h.mean(), 1.5);
  EXPECT_DOUBLE_EQ(h.second_moment(), 1.25 + 2.25);
}

TEST(Hypoexponential, EqualScalesMatchGamma) {
  const Hypoexponential<double> h(Eigen::VectorXd::Constant(6, 0.4));
  EXPECT_EQ(h.route(), HypoexpRoute::erlang);
  for (double t : {0.3, 1.0, 2.4, 6.0}) {
    EXPECT_NEAR(h.pdf(t), boost::math::gamma_p_derivative(6.0, t / 0.4) / 0.4,
                1e-13 * h.pdf(t));
    EXPECT_NEAR(h.survival(t), boost::math::gamma_q(6.0, t / 0.4), 1e-13);
  }
}

TEST(Hypoexponential, NearlyEqualScalesApproachGamma) {
  for (double g : {1e-6, 1e-9, 1e-12}) {
    const Hypoexponential<double> h(vec({1.0, 1.0 + g, 1.0 - g}));
    for (double t : {0.5, 1.0, 3.0}) {
      const double gpdf = boost::math::gamma_p_derivative(3.0, t);
      EXPECT_NEAR(h.pdf(t), gpdf, 1e-8 * gpdf) << "g=" << g << " t=" << t;
      const double gsurv = boost::math::gamma_q(3.0, t);
      EXPECT_NEAR(h.survival(t), gsurv, 1e-8 * gsurv);
    }
  }
}

TEST(Hypoexponential, RouteSelection) {
  EXPECT_EQ(Hypoexponential<double>(vec({1.0, 2.0, 4.0})).route(),
            HypoexpRoute::partial_fractions);
  EXPECT_EQ(Hypoexponential<double>(vec({1.0, 1.0 + 1e-8, 3.0})).route(),
            HypoexpRoute::phase_type);
  // Distinct but clustered rates amplify partial-fraction coefficients.
  Eigen::VectorXd clustered(8);
  for (int i = 0; i < 8; ++i) clustered(i) = 1.0 + 0.002 * i;
  const Hypoexponential<double> c(clustered);
  EXPECT_GT(c.amplification(), kMaxAmplification);
  EXPECT_EQ(c.route(), HypoexpRoute::phase_type);
}

TEST(Hypoexponential, ForcedRoutesValidateScales) {
  EXPECT_THROW(Hypoexponential<double>(vec({1.0, 2.0}), HypoexpRoute::erlang), InvalidScale);
  EXPECT_THROW(Hypoexponential<double>(vec({1.0, 1.0}), HypoexpRoute::partial_fractions),
               InvalidScale);
  EXPECT_NO_THROW(Hypoexponential<double>(vec({1.0, 1.0}), HypoexpRoute::phase_type));
}

TEST(Hypoexponential, RejectsInvalidScales) {
  EXPECT_THROW(Hypoexponential<double>(Eigen::VectorXd()), InvalidScale);
  EXPECT_THROW(Hypoexponential<double>(vec({1.0, 0.0})), InvalidScale);
  EXPECT_THROW(Hypoexponential<double>(vec({-1.0})), InvalidScale);
  EXPECT_THROW(Hypoexponential<double>(vec({1.0, INFINITY})), InvalidScale);
}

TEST(Hypoexponential, BoundaryValues) {
  const Hypoexponential<double> h(vec({0.3, 0.9, 1.4}));
  EXPECT_EQ(h.survival(0.0), 1.0);
  EXPECT_EQ(h.pdf(0.0), 0.0);
  EXPECT_EQ(h.pdf(-1.0), 0.0);
  EXPECT_NEAR(h.cdf(1.0) + h.survival(1.0), 1.0, 1e-15);
}

TEST(Hypoexponential, LongDoubleAgreesWithDouble) {
  Eigen::Matrix<long double, Eigen::Dynamic, 1> s(3);
  s << 0.5L, 0.5001L, 2.0L;
  const Hypoexponential<long double> hl(s);
  const Hypoexponential<double> hd(s.cast<double>());
  for (double t : {0.5, 1.5, 4.0})
    EXPECT_NEAR(static_cast<double>(hl.survival(t)), hd.survival(t), 1e-12);
}

// Both evaluation routes agree with the long-double oracle across the switch
// point: one close pair with relative gap between 1e-7 and 1e-5, others apart.
TEST(HypoexponentialProperty, CrossoverBandAgreesWithOracle) {
  for (double gap : {1e-5, 3e-6, 1.5e-6, 1e-6, 7e-7, 3e-7, 1e-7}) {
    const Eigen::VectorXd scales = vec({1.0, 1.0 + gap, 0.35, 2.2});
    const LongDoubleOracle oracle(scales);
    const Hypoexponential<double> automatic(scales);
    const Hypoexponential<double> phase(scales, HypoexpRoute::phase_type);
    for (double t : {0.4, 1.5, 3.8, 9.0}) {
      const double s_ref = oracle.survival(t);
      const double d_ref = oracle.pdf(t);
      EXPECT_NEAR(automatic.survival(t), s_ref, 1e-8 * s_ref) << "gap " << gap;
      EXPECT_NEAR(phase.survival(t), s_ref, 1e-8 * s_ref) << "gap " << gap;
      EXPECT_NEAR(automatic.pdf(t), d_ref, 1e-8 * d_ref) << "gap " << gap;
      EXPECT_NEAR(phase.pdf(t), d_ref, 1e-8 * d_ref) << "gap " << gap;
    }
  }
}

// Density integrates to one and survival equals the integrated upper tail.
TEST(HypoexponentialProperty, DensityAndSurvivalConsistent) {
  std::mt19937_64 gen(2718);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::uniform_int_distribution<int> len(1, 8);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd scales(len(gen));
    for (Eigen::Index i = 0; i < scales.size(); ++i) scales(i) = u(gen);
    const Hypoexponential<double> h(scales);
    const double top = 60.0 * scales.sum();
    const auto pdf = [&](double t) { return h.pdf(t); };
    EXPECT_NEAR(testing::integrate(pdf, 0.0, top), 1.0, 1e-8);
    const double t0 = 0.8 * scales.sum();
    EXPECT_NEAR(testing::integrate(pdf, t0, top), h.survival(t0), 1e-8);
    EXPECT_NEAR(testing::integrate([&](double t) { return t * h.pdf(t); }, 0.0, top),
                h.mean(), 1e-7 * h.mean());
  }
}

TEST(HypoexponentialProperty, SurvivalNonIncreasing) {
  Eigen::VectorXd clustered(8);
  for (int i = 0; i < 8; ++i) clustered(i) = 0.2 + 0.0005 * i;
  const Hypoexponential<double> h(clustered);
  double prev = 1.0;
  for (int i = 1; i <= 400; ++i) {
    const double s = h.survival(0.01 * i);
    EXPECT_LE(s, prev + 1e-15);
    prev = s;
  }
}

}  // namespace
}  // namespace njpc
