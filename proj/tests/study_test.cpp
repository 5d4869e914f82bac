#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "njpc/discrete.hpp"
#include "njpc/exactdist.hpp"
#include "njpc/study.hpp"

namespace njpc {
namespace {

StudyConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_study_config(in);
}

const char* kBaselineConfig = R"(# baseline point-estimation configuration
m = 15
n = 12
k = 6
R = 4,0,0,0,0
theta1 = 0.5
theta2 = 1.0   # trailing comment
n_reps_point = 10000
master_seed = 17
ci_methods = none
)";

void expect_config_error(const std::string& text, int line, const std::string& key) {
  try {
    parse(text);
    FAIL() << "expected ConfigError for:\n" << text;
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.key(), key) << e.what();
  }
}

TEST(ParseStudyConfig, ReadsAllFields) {
  const StudyConfig c = parse(kBaselineConfig);
  EXPECT_EQ(c.scheme, CensoringScheme(15, 12, 6, {4, 0, 0, 0, 0}));
  EXPECT_EQ(c.true_params.theta1, 0.5);
  EXPECT_EQ(c.true_params.theta2, 1.0);
  EXPECT_EQ(c.n_reps_point, 10000);
  EXPECT_EQ(c.master_seed, 17u);
  EXPECT_FALSE(c.exact);
  EXPECT_FALSE(c.bootstrap);
  EXPECT_EQ(c.n_reps_ci, 1000);
  EXPECT_EQ(c.bootstrap_B, 1000);
  EXPECT_DOUBLE_EQ(c.level, 0.9);
}

TEST(ParseStudyConfig, MethodsAndSingleFailureScheme) {
  const StudyConfig c = parse("m=5\nn=6\nk=1\nR=\ntheta1=1\ntheta2=2\nci_methods=bootstrap\n");
  EXPECT_EQ(c.scheme.k(), 1);
  EXPECT_TRUE(c.bootstrap);
  EXPECT_FALSE(c.exact);
}

TEST(ParseStudyConfig, ReportsOffendingLineAndKey) {
  expect_config_error("m = 15\nn = 12\nk = 6\nR = 4,x,0,0,0\ntheta1 = .5\ntheta2 = 1\n", 4, "R");
  expect_config_error("m = 15\nn = 12\nk = 8\nR = 0,0,0,0,0,7,0\ntheta1 = .5\ntheta2 = 1\n", 4,
                      "R");
  expect_config_error("m = 15\nn = 12\nk = 6\nR = 4,0,0,0,0\ntheta1 = .5\ntheta2 = 1\nseed = 3\n",
                      7, "seed");
  expect_config_error("m = 15\nm = 16\n", 2, "m");
  expect_config_error("m = 15\nn = 12\nk = 6\nR = 4,0,0,0,0\ntheta1 = .5\ntheta2 = 1\nlevel = 1.5\n",
                      7, "level");
  expect_config_error("m = 15\nn = 12\nk = six\n", 3, "k");
  expect_config_error("m = 15\nn = 12\nk = 6\nthis line has no equals sign\n", 4, "");
}

TEST(ParseStudyConfig, MissingRequiredKey) {
  try {
    parse("m = 15\nn = 12\nk = 6\nR = 4,0,0,0,0\ntheta1 = 0.5\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "theta2");
  }
}

TEST(RunPointStudy, BaselineConfiguration) {
  const StudyReport r = run_point_study(parse(kBaselineConfig));
  ASSERT_TRUE(r.ae && r.mse);
  EXPECT_NEAR((*r.ae)[0], 0.575, 0.02);
  EXPECT_NEAR((*r.mse)[0], 0.099, 0.015);
  EXPECT_NEAR((*r.ae)[1], 0.995, 0.04);
  EXPECT_NEAR((*r.mse)[1], 0.377, 0.06);
  EXPECT_FALSE(r.exact.has_value());
}

TEST(RunPointStudy, EightFailureConfiguration) {
  StudyConfig c = parse(kBaselineConfig);
  c.scheme = CensoringScheme(15, 12, 8, {3, 0, 0, 0, 0, 0, 0});
  const StudyReport r = run_point_study(c);
  EXPECT_NEAR((*r.ae)[0], 0.538, 0.02);
}

// Degenerate draws occur at the rate the failure-count law predicts.
TEST(RunPointStudyProperty, DegenerateRateMatchesFailureCountLaw) {
  StudyConfig c = parse(kBaselineConfig);
  c.scheme = CensoringScheme(15, 12, 6, {0, 0, 0, 0, 0});
  c.true_params = ExpParams(0.3, 1.5);  // Pop-1 failures dominate
  const StudyReport r = run_point_study(c);
  const double q = 1.0 - failure_count_dist(c.scheme, c.true_params).conditioning_mass();
  const double n = static_cast<double>(r.n_attempts);
  EXPECT_GT(r.n_degenerate, 0);
  EXPECT_NEAR(r.n_degenerate / n, q, 3 * std::sqrt(q * (1 - q) / n));
}

// At ten times the usual replications AE sits within 3 SE of the exact mean.
TEST(RunPointStudyProperty, AverageEstimateConvergesToExactMean) {
  StudyConfig c = parse(kBaselineConfig);
  c.n_reps_point = 100000;
  const StudyReport r = run_point_study(c);
  for (Parameter which : {Parameter::theta1, Parameter::theta2}) {
    const int p = which == Parameter::theta1 ? 0 : 1;
    const MleMoments mom = mle_moments(c.scheme, c.true_params, which);
    const double se = std::sqrt(mom.variance() / c.n_reps_point);
    EXPECT_NEAR((*r.ae)[p], mom.mean, 3 * se) << to_string(which);
  }
}

TEST(RunStudy, ByteIdenticalAcrossWorkerCounts) {
  StudyConfig c = parse(
      "m = 20\nn = 25\nk = 8\nR = 7,0,0,0,0,0,0\ntheta1 = 0.5\ntheta2 = 0.6\n"
      "n_reps_point = 2000\nn_reps_ci = 40\nbootstrap_B = 200\nmaster_seed = 99\n");
  std::string outputs[3];
  const unsigned workers[3] = {1, 3, 1};
  for (int i = 0; i < 3; ++i) {
    c.workers = workers[i];
    std::ostringstream out;
    write_report_csv(out, run_study(c));
    outputs[i] = out.str();
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_EQ(outputs[0], outputs[2]);
  EXPECT_EQ(outputs[0].rfind("param,ae,mse,al_exact,cp_exact,al_boot,cp_boot,n_degenerate\n", 0),
            0u);
}

TEST(WriteReportCsv, MissingFieldsAreNa) {
  StudyReport r;
  r.ae = std::array<double, 2>{0.5, 1.0};
  r.mse = std::array<double, 2>{0.1, 0.2};
  r.n_degenerate = 3;
  std::ostringstream out;
  write_report_csv(out, r);
  EXPECT_EQ(out.str(),
            "param,ae,mse,al_exact,cp_exact,al_boot,cp_boot,n_degenerate\n"
            "theta1,0.5,0.1,NA,NA,NA,NA,3\n"
            "theta2,1,0.2,NA,NA,NA,NA,3\n");
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](int i) {
                              if (i == 7) throw InvalidArgument("boom");
                            }),
               InvalidArgument);
}

// Coverage of nominal 90% intervals stays in a 0.85..0.95 band for every
// scheme of the interval-study grid (1000 replications each).
TEST(RunCiStudyProperty, CoverageInSanityBand) {
  const std::vector<std::pair<int, std::vector<int>>> schemes = {
      {8, {7, 0, 0, 0, 0, 0, 0}}, {8, {0, 0, 0, 7, 0, 0, 0}}, {8, {0, 0, 0, 0, 0, 7, 0}},
      {8, {0, 0, 0, 0, 0, 0, 7}}, {8, {0, 0, 0, 0, 0, 0, 0}}, {6, {10, 0, 0, 0, 0}},
      {6, {0, 0, 10, 0, 0}},      {6, {0, 0, 0, 0, 10}},      {6, {0, 0, 0, 0, 0}}};
  StudyConfig c = parse("m=20\nn=25\nk=1\nR=\ntheta1=0.5\ntheta2=0.6\nmaster_seed=5\n");
  for (const auto& [k, r] : schemes) {
    c.scheme = CensoringScheme(20, 25, k, r);
    const StudyReport rep = run_ci_study(c);
    for (int p = 0; p < 2; ++p) {
      EXPECT_GE(rep.exact->coverage[p], 0.85) << "k=" << k << " p=" << p;
      EXPECT_LE(rep.exact->coverage[p], 0.95) << "k=" << k << " p=" << p;
      EXPECT_GE(rep.bootstrap->coverage[p], 0.85) << "k=" << k << " p=" << p;
      EXPECT_LE(rep.bootstrap->coverage[p], 0.95) << "k=" << k << " p=" << p;
    }
  }
}

}  // namespace
}  // namespace njpc
