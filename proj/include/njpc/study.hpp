#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>

#include "njpc/core.hpp"
#include "njpc/inference.hpp"

namespace njpc {

struct StudyConfig {
  CensoringScheme scheme;
  ExpParams true_params;
  int n_reps_point = 10000;
  int n_reps_ci = 1000;
  int bootstrap_B = 1000;
  double level = 0.90;
  std::uint64_t master_seed = 0;
  bool exact = true;
  bool bootstrap = true;
  unsigned workers = 0;  // 0: one per hardware thread
};

// Flat "key = value" text; '#' starts a comment. Keys: m, n, k, R
// (comma-separated, empty for k = 1), theta1, theta2, n_reps_point,
// n_reps_ci, bootstrap_B, level, master_seed, ci_methods
// (comma-separated subset of exact,bootstrap, or none), workers.
// m, n, k, theta1 and theta2 are required. Throws ConfigError.
StudyConfig parse_study_config(std::istream& in);

struct MethodSummary {
  std::array<double, 2> average_length{};  // finite intervals only
  std::array<double, 2> coverage{};
  std::array<int, 2> open_ended{};          // FlatTail upper endpoints
};

struct StudyReport {
  std::optional<std::array<double, 2>> ae;
  std::optional<std::array<double, 2>> mse;
  std::optional<MethodSummary> exact;
  std::optional<MethodSummary> bootstrap;
  long n_degenerate = 0;  // replications redrawn because m_k was 0 or k
  long n_attempts = 0;    // all draws, degenerate or not
  double runtime_seconds = 0.0;
};

StudyReport run_point_study(const StudyConfig& config);
StudyReport run_ci_study(const StudyConfig& config);
// Point study, then the CI study when any CI method is enabled.
StudyReport run_study(const StudyConfig& config);

// Header `param,ae,mse,al_exact,cp_exact,al_boot,cp_boot,n_degenerate` and one
// row per parameter; fields not computed are written as NA.
void write_report_csv(std::ostream& out, const StudyReport& report,
                      int precision = 6);

// Runs task(i) for i in [0, count) on `workers` threads (0: hardware).
void parallel_for(int count, unsigned workers, const std::function<void(int)>& task);

}  // namespace njpc
